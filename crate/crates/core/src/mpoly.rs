//! Sparse multivariate (Laurent) polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so the canonical
//! order (universe variable order, then lexicographic exponents) is the
//! iteration order and serialized output is deterministic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::universe::VarUniverse;

pub type Coeff = BigRational;
pub type Expo = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    universe: Arc<VarUniverse>,
    terms: BTreeMap<Expo, Coeff>,
}

impl MPoly {
    pub fn zero(universe: Arc<VarUniverse>) -> Self {
        MPoly {
            universe,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(universe: Arc<VarUniverse>, c: Coeff) -> Self {
        let mut p = MPoly::zero(universe);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.universe.arity()], c);
        }
        p
    }

    pub fn one(universe: Arc<VarUniverse>) -> Self {
        Self::constant(universe, Coeff::one())
    }

    pub fn from_int(universe: Arc<VarUniverse>, n: i64) -> Self {
        Self::constant(universe, Coeff::from(BigInt::from(n)))
    }

    pub fn var(universe: Arc<VarUniverse>, idx: usize) -> Self {
        Self::monomial(universe, idx, 1)
    }

    /// A single variable raised to `exp` (negative only for Laurent variables).
    pub fn monomial(universe: Arc<VarUniverse>, idx: usize, exp: i32) -> Self {
        let mut e = vec![0; universe.arity()];
        e[idx] = exp;
        let mut terms = BTreeMap::new();
        terms.insert(e, Coeff::one());
        MPoly { universe, terms }
    }

    pub fn from_terms(
        universe: Arc<VarUniverse>,
        terms: impl IntoIterator<Item = (Expo, Coeff)>,
    ) -> Result<Self> {
        let mut p = MPoly::zero(universe);
        for (e, c) in terms {
            if e.len() != p.universe.arity() {
                return Err(Error::UniverseMismatch(format!(
                    "exponent vector of arity {} in universe of arity {}",
                    e.len(),
                    p.universe.arity()
                )));
            }
            for (i, &x) in e.iter().enumerate() {
                if x < 0 && !p.universe.is_laurent(i) {
                    return Err(Error::NegativeExponent(p.universe.name(i).to_string()));
                }
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    /// The single-term test; Laurent monomials are the units of Laurent rings.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub(crate) fn add_term(&mut self, e: Expo, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_same_universe(&self, other: &MPoly) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch(
                "operands live in different universes".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same_universe(other)?;
        Ok(self.merge_with(other, false))
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same_universe(other)?;
        Ok(self.merge_with(other, true))
    }

    /// Linear merge of the two sorted term maps.
    fn merge_with(&self, other: &MPoly, negate: bool) -> MPoly {
        let mut out: Vec<(Expo, Coeff)> = Vec::with_capacity(self.num_terms() + other.num_terms());
        let mut it1 = self.terms.iter().peekable();
        let mut it2 = other.terms.iter().peekable();
        loop {
            let ord = match (it1.peek(), it2.peek()) {
                (Some((e1, _)), Some((e2, _))) => e1.cmp(e2),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => break,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    let (e, c) = it1.next().unwrap();
                    out.push((e.clone(), c.clone()));
                }
                std::cmp::Ordering::Greater => {
                    let (e, c) = it2.next().unwrap();
                    out.push((e.clone(), if negate { -c.clone() } else { c.clone() }));
                }
                std::cmp::Ordering::Equal => {
                    let (e, c1) = it1.next().unwrap();
                    let (_, c2) = it2.next().unwrap();
                    let sum = if negate { c1 - c2 } else { c1 + c2 };
                    if !sum.is_zero() {
                        out.push((e.clone(), sum));
                    }
                }
            }
        }
        let mut res = MPoly::zero(self.universe.clone());
        res.terms = out.into_iter().collect();
        res
    }

    pub fn neg(&self) -> MPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.universe.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same_universe(other)?;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let cross = small.num_terms().saturating_mul(large.num_terms());
        const CROSS_LIMIT: usize = 1 << 23;
        if cross > CROSS_LIMIT {
            // Memory-safe fallback for very large cross products: accumulate
            // into the result map, whose size tracks the true product.
            let mut out = MPoly::zero(self.universe.clone());
            for (e1, c1) in &small.terms {
                for (e2, c2) in &large.terms {
                    let e: Expo = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    out.add_term(e, c1 * c2);
                }
            }
            return Ok(out);
        }
        // Collect all pairwise products, sort once, combine equal exponents,
        // and bulk-build the result map.
        let mut prods: Vec<(Expo, Coeff)> = Vec::with_capacity(cross);
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                let e: Expo = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                prods.push((e, c1 * c2));
            }
        }
        prods.sort_unstable_by(|(x, _), (y, _)| x.cmp(y));
        let mut combined: Vec<(Expo, Coeff)> = Vec::with_capacity(prods.len());
        for (e, c) in prods {
            match combined.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc += &c;
                }
                _ => combined.push((e, c)),
            }
        }
        let mut out = MPoly::zero(self.universe.clone());
        out.terms = combined.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    /// Multiply by a single monomial term, in place.
    pub fn mul_term(&self, e: &[i32], c: &Coeff) -> MPoly {
        let mut out = MPoly::zero(self.universe.clone());
        for (e1, c1) in &self.terms {
            let ex: Expo = e1.iter().zip(e).map(|(a, b)| a + b).collect();
            out.add_term(ex, c1 * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Result<MPoly> {
        let mut out = MPoly::one(self.universe.clone());
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Lex-greatest term in the canonical order.
    pub fn leading(&self) -> Option<(&Expo, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
    }

    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .min()
    }

    /// Degree range of a single variable across all terms.
    pub fn var_range(&self, idx: usize) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for e in self.terms.keys() {
            let x = e[idx];
            r = Some(match r {
                None => (x, x),
                Some((lo, hi)) => (lo.min(x), hi.max(x)),
            });
        }
        r
    }

    /// Sum of all terms of minimal total degree across all variables jointly.
    pub fn lowest_homogeneous_part(&self) -> Result<MPoly> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        for (i, _) in self.universe.vars().iter().enumerate() {
            if let Some((lo, _)) = self.var_range(i) {
                if lo < 0 {
                    return Err(Error::NegativeExponent(self.universe.name(i).to_string()));
                }
            }
        }
        let min = self.min_total_degree().unwrap();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().map(|&x| x as i64).sum::<i64>() == min)
            .map(|(e, c)| (e.clone(), c.clone()));
        MPoly::from_terms(self.universe.clone(), terms)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.total_degree(), self.min_total_degree()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Applies an index permutation/embedding to exponent vectors:
    /// variable `i` of `self` becomes variable `map[i]` of `target`.
    pub fn map_variables(&self, target: &Arc<VarUniverse>, map: &[usize]) -> Result<MPoly> {
        let mut out = MPoly::zero(target.clone());
        for (e, c) in &self.terms {
            let mut ex = vec![0; target.arity()];
            for (i, &x) in e.iter().enumerate() {
                ex[map[i]] += x;
            }
            for (i, &x) in ex.iter().enumerate() {
                if x < 0 && !target.is_laurent(i) {
                    return Err(Error::NegativeExponent(target.name(i).to_string()));
                }
            }
            out.add_term(ex, c.clone());
        }
        Ok(out)
    }

    /// Re-expresses `self` in a larger universe containing all its variables.
    pub fn extend_to(&self, target: &Arc<VarUniverse>) -> Result<MPoly> {
        if &self.universe == target {
            return Ok(self.clone());
        }
        let map = self.universe.embedding_into(target)?;
        self.map_variables(target, &map)
    }

    /// Swap two variables (used for symmetry checks and symmetrization).
    pub fn swap_vars(&self, i: usize, j: usize) -> MPoly {
        // Keys stay distinct under a variable swap; bulk-build the new map.
        let mut out = MPoly::zero(self.universe.clone());
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ex = e.clone();
                ex.swap(i, j);
                (ex, c.clone())
            })
            .collect();
        out
    }

    /// Permute variables: exponent of variable `i` moves to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        // Keys stay distinct under a permutation; bulk-build the new map.
        let mut out = MPoly::zero(self.universe.clone());
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ex = vec![0; e.len()];
                for (i, &x) in e.iter().enumerate() {
                    ex[perm[i]] = x;
                }
                (ex, c.clone())
            })
            .collect();
        out
    }

    /// True iff invariant under every adjacent transposition within each block.
    pub fn is_symmetric(&self, blocks: &[Vec<usize>]) -> bool {
        for block in blocks {
            for pair in block.windows(2) {
                if self.swap_vars(pair[0], pair[1]) != *self {
                    return false;
                }
            }
        }
        true
    }

    /// Splits a Laurent polynomial as `monomial_shift * nonnegative_part`.
    /// The returned exponent vector has `min(0, lowest exponent)` per variable.
    pub fn laurent_shift(&self) -> Expo {
        let n = self.universe.arity();
        let mut shift = vec![0i32; n];
        for i in 0..n {
            if let Some((lo, _)) = self.var_range(i) {
                shift[i] = lo.min(0);
            }
        }
        shift
    }

    /// Exact division; returns `None` when `other` does not divide `self`.
    /// Laurent inputs are normalized to the polynomial ring first.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(self.universe.clone()));
        }
        // Fast path for root-factor divisors `c * (x_a - x_b)`: division
        // reduces to suffix sums within groups of fixed `e_a + e_b`, which is
        // near-linear in the dividend instead of quadratic, and works on
        // Laurent exponents directly.
        if other.num_terms() == 2 {
            let unit = |e: &Expo| -> Option<usize> {
                let mut idx = None;
                for (i, &x) in e.iter().enumerate() {
                    if x == 1 && idx.is_none() {
                        idx = Some(i);
                    } else if x != 0 {
                        return None;
                    }
                }
                idx
            };
            let mut it = other.terms.iter();
            let (e1, c1) = it.next()?;
            let (e2, c2) = it.next()?;
            if let (Some(i1), Some(i2)) = (unit(e1), unit(e2)) {
                if i1 != i2 && *c1 == -c2.clone() {
                    return self.div_linear_pair(i1, i2, c1);
                }
            }
        }
        let s_shift = self.laurent_shift();
        let o_shift = other.laurent_shift();
        let neg = |e: &Expo| -> Expo { e.iter().map(|&x| -x).collect() };
        let p = self.mul_term(&neg(&s_shift), &Coeff::one());
        let d = other.mul_term(&neg(&o_shift), &Coeff::one());
        let q = p.div_exact_nonneg(&d)?;
        // Quotient shift: may be negative; only legal for Laurent variables.
        let qs: Expo = s_shift
            .iter()
            .zip(&o_shift)
            .map(|(a, b)| a - b)
            .collect();
        let out = q.mul_term(&qs, &Coeff::one());
        for (e, _) in &out.terms {
            for (i, &x) in e.iter().enumerate() {
                if x < 0 && !self.universe.is_laurent(i) {
                    return None;
                }
            }
        }
        Some(out)
    }

    fn div_exact_nonneg(&self, other: &MPoly) -> Option<MPoly> {
        let mut rem = self.terms.clone();
        let mut quo = MPoly::zero(self.universe.clone());
        let (de, dc) = other.leading()?;
        let de = de.clone();
        let dc = dc.clone();
        // In-place long division: each step cancels the (lex-)leading
        // remainder term against the divisor's leading term, touching only
        // `other.num_terms()` entries of the remainder.
        while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Expo = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = &rc / &dc;
            for (e2, c2) in &other.terms {
                let key: Expo = qe.iter().zip(e2).map(|(a, b)| a + b).collect();
                let sub = &qc * c2;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= &sub;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-sub);
                    }
                }
            }
            quo.add_term(qe, qc);
        }
        Some(quo)
    }

    /// Exact division by `scale * (x_a - x_b)`. The divisor preserves
    /// `e_a + e_b` and all other exponents, so the dividend splits into
    /// independent groups; within each group the quotient coefficients are
    /// running suffix sums (descending in `e_a`), and the group's total sum
    /// must vanish for the division to be exact. Works directly on Laurent
    /// exponents. Near-linear in the dividend size.
    fn div_linear_pair(&self, a: usize, b: usize, scale: &Coeff) -> Option<MPoly> {
        // Group key: the exponent vector with `e_a` replaced by `e_a + e_b`
        // and `e_b` by 0, compared lexicographically without materializing
        // it; ties broken by descending `e_a`.
        let key_at = |e: &Expo, i: usize| -> i32 {
            if i == a {
                e[a] + e[b]
            } else if i == b {
                0
            } else {
                e[i]
            }
        };
        let same_group =
            |x: &Expo, y: &Expo| (0..x.len()).all(|i| key_at(x, i) == key_at(y, i));
        let mut rows: Vec<(&Expo, &Coeff)> = self.terms.iter().collect();
        rows.sort_unstable_by(|(xe, _), (ye, _)| {
            for i in 0..xe.len() {
                match key_at(xe, i).cmp(&key_at(ye, i)) {
                    std::cmp::Ordering::Equal => {}
                    ord => return ord,
                }
            }
            ye[a].cmp(&xe[a])
        });
        let inv = Coeff::one() / scale;
        let mut out: Vec<(Expo, Coeff)> = Vec::new();
        let mut idx = 0;
        while idx < rows.len() {
            // One group: consecutive rows with the same key, `e_a` descending.
            let start = idx;
            while idx + 1 < rows.len() && same_group(rows[idx].0, rows[idx + 1].0) {
                idx += 1;
            }
            idx += 1;
            let s = rows[start].0[a] + rows[start].0[b];
            let mut run = Coeff::zero();
            for r in start..idx {
                let (e, c) = rows[r];
                run += c;
                if r + 1 == idx {
                    // Below the smallest exponent the quotient vanishes, so
                    // the total group sum must be zero.
                    if !run.is_zero() {
                        return None;
                    }
                    break;
                }
                if run.is_zero() {
                    continue;
                }
                let next_ea = rows[r + 1].0[a];
                let coeff = &run * &inv;
                for kk in next_ea..e[a] {
                    let mut q = e.clone();
                    q[a] = kk;
                    q[b] = s - 1 - kk;
                    out.push((q, coeff.clone()));
                }
            }
        }
        let mut quo = MPoly::zero(self.universe.clone());
        quo.terms = out.into_iter().collect();
        Some(quo)
    }

    /// Rational content: positive rational `c` such that `self / c` has
    /// coprime integer coefficients with positive leading coefficient sign
    /// left untouched.
    pub fn rational_content(&self) -> Coeff {
        if self.is_zero() {
            return Coeff::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        Coeff::new(num_gcd, den_lcm)
    }

    pub fn primitive_part(&self) -> MPoly {
        let c = self.rational_content();
        if c.is_one() || self.is_zero() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    /// Multivariate GCD by content/primitive-part recursion with a primitive
    /// pseudo-remainder sequence. Result is primitive with unit content.
    pub fn gcd(&self, other: &MPoly) -> Result<MPoly> {
        self.check_same_universe(other)?;
        // Laurent normalization: GCD is defined up to units, so strip shifts.
        let a = self.mul_term(
            &self.laurent_shift().iter().map(|&x| -x).collect::<Expo>(),
            &Coeff::one(),
        );
        let b = other.mul_term(
            &other.laurent_shift().iter().map(|&x| -x).collect::<Expo>(),
            &Coeff::one(),
        );
        let g = gcd_nonneg(&a, &b)?;
        Ok(g.primitive_part())
    }

    /// Derivative-free evaluation helper: substitute rational values for a
    /// subset of variables (used by tests and rank checks).
    pub fn eval_partial(&self, values: &BTreeMap<usize, Coeff>) -> Result<MPoly> {
        let mut out = MPoly::zero(self.universe.clone());
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ex = e.clone();
            for (&i, v) in values {
                let k = e[i];
                if k < 0 {
                    if v.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    coeff *= num::pow::pow(v.recip(), (-k) as usize);
                } else if k > 0 {
                    coeff *= num::pow::pow(v.clone(), k as usize);
                }
                ex[i] = 0;
            }
            out.add_term(ex, coeff);
        }
        Ok(out)
    }
}

/// GCD of polynomials with nonnegative exponents.
fn gcd_nonneg(a: &MPoly, b: &MPoly) -> Result<MPoly> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    // Monomial fast path: every divisor of a monomial is a monomial, so the
    // GCD is the per-variable minimum exponent over all terms of both sides.
    if a.is_monomial() || b.is_monomial() {
        let arity = a.universe().arity();
        let mut e = vec![i32::MAX; arity];
        for (ex, _) in a.terms().chain(b.terms()) {
            for i in 0..arity {
                e[i] = e[i].min(ex[i]);
            }
        }
        return MPoly::from_terms(a.universe().clone(), [(e, Coeff::one())]);
    }
    // Pick the highest-index variable appearing in either operand.
    let arity = a.universe().arity();
    let mut main_var = None;
    for i in (0..arity).rev() {
        let da = a.var_range(i).map_or(0, |(_, hi)| hi);
        let db = b.var_range(i).map_or(0, |(_, hi)| hi);
        if da > 0 || db > 0 {
            main_var = Some(i);
            break;
        }
    }
    let Some(x) = main_var else {
        // Both constants.
        return Ok(MPoly::one(a.universe().clone()));
    };

    let ua = univariate_in(a, x);
    let ub = univariate_in(b, x);
    let cont_a = poly_list_gcd(a.universe(), &ua)?;
    let cont_b = poly_list_gcd(b.universe(), &ub)?;
    let cont = gcd_nonneg(&cont_a, &cont_b)?;

    let pp_a = divide_coeffs(&ua, &cont_a);
    let pp_b = divide_coeffs(&ub, &cont_b);

    // Subresultant pseudo-remainder sequence in x: coefficient growth is
    // tamed by exact division by known factors g * h^delta, with no
    // per-step recursive content computation.
    let mut r0 = pp_a;
    let mut r1 = pp_b;
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let one = MPoly::one(a.universe().clone());
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = r0.len() - r1.len();
        let r = pseudo_rem(&r0, &r1, delta)?;
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            // Nonzero remainder of degree 0 in x: the x-part of the GCD is
            // trivial.
            r1 = vec![one.clone()];
            break;
        }
        let divisor = g.mul(&h.pow(delta as u32)?)?;
        let next: Vec<MPoly> = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        r0 = r1;
        r1 = next;
        g = r0.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32)?
                .div_exact(&h.pow(delta as u32 - 1)?)
                .expect("subresultant h-update is exact")
        };
    }
    let gcd_pp = make_primitive(a.universe(), &r1)?;
    let g = assemble(a.universe(), &gcd_pp, x)?;
    g.mul(&cont).map(|p| p.primitive_part())
}

fn univariate_in(p: &MPoly, x: usize) -> Vec<MPoly> {
    let deg = p.var_range(x).map_or(0, |(_, hi)| hi) as usize;
    let mut coeffs = vec![MPoly::zero(p.universe().clone()); deg + 1];
    for (e, c) in p.terms() {
        let k = e[x] as usize;
        let mut ex = e.clone();
        ex[x] = 0;
        coeffs[k].add_term(ex, c.clone());
    }
    coeffs
}

fn assemble(u: &Arc<VarUniverse>, coeffs: &[MPoly], x: usize) -> Result<MPoly> {
    let mut out = MPoly::zero(u.clone());
    for (k, c) in coeffs.iter().enumerate() {
        let xk = MPoly::monomial(u.clone(), x, k as i32);
        out = out.add(&c.mul(&xk)?)?;
    }
    Ok(out)
}

fn poly_list_gcd(u: &Arc<VarUniverse>, list: &[MPoly]) -> Result<MPoly> {
    let mut g = MPoly::zero(u.clone());
    for p in list {
        g = gcd_nonneg(&g, p)?;
        if g.is_constant() && !g.is_zero() {
            return Ok(MPoly::one(u.clone()));
        }
    }
    if g.is_zero() {
        Ok(MPoly::one(u.clone()))
    } else {
        Ok(g)
    }
}

fn divide_coeffs(coeffs: &[MPoly], d: &MPoly) -> Vec<MPoly> {
    coeffs
        .iter()
        .map(|c| c.div_exact(d).expect("content must divide"))
        .collect()
}

fn trim(coeffs: &mut Vec<MPoly>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

fn make_primitive(u: &Arc<VarUniverse>, coeffs: &[MPoly]) -> Result<Vec<MPoly>> {
    let mut v = coeffs.to_vec();
    trim(&mut v);
    if v.is_empty() {
        return Ok(v);
    }
    let cont = poly_list_gcd(u, &v)?;
    let mut out = divide_coeffs(&v, &cont);
    // Rational content must be common to the whole coefficient list; scaling
    // each coefficient independently would change the polynomial.
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for p in &out {
        for (_, c) in p.terms() {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
    }
    let rc = Coeff::new(num_gcd, den_lcm);
    if !rc.is_one() {
        let inv = rc.recip();
        out = out.iter().map(|p| p.scale(&inv)).collect();
    }
    Ok(out)
}

/// Pseudo-remainder of `a` by `b` viewed as univariate coefficient lists,
/// normalized to the exact multiplier `lc(b)^(delta + 1)` required by the
/// subresultant recurrence.
fn pseudo_rem(a: &[MPoly], b: &[MPoly], delta: usize) -> Result<Vec<MPoly>> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    let lb = bb[db].clone();
    let mut steps = 0usize;
    while r.len() >= bb.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r = lb * r - lr * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(&lb)?;
        }
        for k in 0..=db {
            let t = bb[k].mul(&lr)?;
            r[k + dr - db] = r[k + dr - db].sub(&t)?;
        }
        trim(&mut r);
        steps += 1;
    }
    // Early cancellation skips multiplier factors; restore them.
    if steps < delta + 1 && !r.is_empty() {
        let extra = lb.pow((delta + 1 - steps) as u32)?;
        for c in r.iter_mut() {
            *c = c.mul(&extra)?;
        }
    }
    Ok(r)
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, "*{}^{}", self.universe.name(i), x)?;
                }
            }
        }
        Ok(())
    }
}
