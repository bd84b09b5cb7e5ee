//! Reduced fractions of multivariate polynomials.
//!
//! Canonical form: `den != 0`, `gcd(num, den)` is a unit, the denominator has
//! minimal exponent 0 in every Laurent variable, and its leading coefficient
//! (lex-greatest term) is 1. Equality of reduced forms is structural.

use num::One;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::{Coeff, Expo, MPoly};
use crate::universe::VarUniverse;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.universe() != den.universe() {
            return Err(Error::UniverseMismatch(
                "numerator and denominator universes differ".into(),
            ));
        }
        let mut r = RatFn { num, den };
        r.reduce()?;
        Ok(r)
    }

    pub fn from_mpoly(p: MPoly) -> RatFn {
        let den = MPoly::one(p.universe().clone());
        RatFn { num: p, den }
    }

    pub fn zero(u: Arc<VarUniverse>) -> RatFn {
        RatFn::from_mpoly(MPoly::zero(u))
    }

    pub fn one(u: Arc<VarUniverse>) -> RatFn {
        RatFn::from_mpoly(MPoly::one(u))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        self.num.universe()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = MPoly::one(self.num.universe().clone());
            return Ok(());
        }
        if !self.den.is_constant() || self.den.as_constant() != Some(Coeff::one()) {
            let g = self.num.gcd(&self.den)?;
            if !g.is_constant() || g.as_constant().map_or(false, |c| !c.is_one()) {
                self.num = self.num.div_exact(&g).ok_or(Error::DivisionByZero)?;
                self.den = self.den.div_exact(&g).ok_or(Error::DivisionByZero)?;
            }
        }
        // Pin the Laurent-monomial unit: denominator min exponent 0 per
        // Laurent variable.
        let mut shift: Expo = vec![0; self.universe().arity()];
        let mut nontrivial = false;
        for i in 0..self.universe().arity() {
            if self.universe().is_laurent(i) {
                if let Some((lo, _)) = self.den.var_range(i) {
                    if lo != 0 {
                        shift[i] = -lo;
                        nontrivial = true;
                    }
                }
            }
        }
        if nontrivial {
            self.num = self.num.mul_term(&shift, &Coeff::one());
            self.den = self.den.mul_term(&shift, &Coeff::one());
        }
        // Monic denominator.
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        Ok(())
    }

    fn aligned(&self, other: &RatFn) -> Result<(RatFn, RatFn)> {
        if self.universe() == other.universe() {
            return Ok((self.clone(), other.clone()));
        }
        let u = self.universe().merge(other.universe())?;
        let a = RatFn {
            num: self.num.extend_to(&u)?,
            den: self.den.extend_to(&u)?,
        };
        let b = RatFn {
            num: other.num.extend_to(&u)?,
            den: other.den.extend_to(&u)?,
        };
        Ok((a, b))
    }

    pub fn add(&self, other: &RatFn) -> Result<RatFn> {
        let (a, b) = self.aligned(other)?;
        let num = a.num.mul(&b.den)?.add(&b.num.mul(&a.den)?)?;
        let den = a.den.mul(&b.den)?;
        RatFn::new(num, den)
    }

    pub fn sub(&self, other: &RatFn) -> Result<RatFn> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFn) -> Result<RatFn> {
        let (a, b) = self.aligned(other)?;
        RatFn::new(a.num.mul(&b.num)?, a.den.mul(&b.den)?)
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = self.aligned(other)?;
        RatFn::new(a.num.mul(&b.den)?, a.den.mul(&b.num)?)
    }

    pub fn recip(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Result<RatFn> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let mut out = RatFn::one(self.universe().clone());
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Result<RatFn> {
        RatFn::new(self.num.scale(c), self.den.clone())
    }

    /// Returns the underlying polynomial when the denominator is 1.
    pub fn to_mpoly(&self) -> Option<MPoly> {
        if self.den.is_constant() && self.den.as_constant() == Some(Coeff::one()) {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn extend_to(&self, target: &Arc<VarUniverse>) -> Result<RatFn> {
        Ok(RatFn {
            num: self.num.extend_to(target)?,
            den: self.den.extend_to(target)?,
        })
    }

    /// `lowest_homogeneous_part(num) / lowest_homogeneous_part(den)`, reduced.
    pub fn lowest_part(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        RatFn::new(
            self.num.lowest_homogeneous_part()?,
            self.den.lowest_homogeneous_part()?,
        )
    }
}

impl std::fmt::Display for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.to_mpoly().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl MPoly {
    /// Image of `self` under the ring map sending variable `i` to `images[i]`.
    /// A variable occurring with negative exponent must map to a nonzero
    /// polynomial; non-monomial images of such variables produce genuine
    /// denominators.
    pub fn substitute_all(&self, target: &Arc<VarUniverse>, images: &[MPoly]) -> Result<RatFn> {
        if images.len() != self.universe().arity() {
            return Err(Error::UniverseMismatch(
                "one image per variable is required".into(),
            ));
        }
        for img in images {
            if img.universe() != target {
                return Err(Error::UniverseMismatch(
                    "image not in the target universe".into(),
                ));
            }
        }
        let mut pow_cache: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        let mut power = |i: usize, k: u32, images: &[MPoly]| -> MPoly {
            pow_cache
                .entry((i, k))
                .or_insert_with(|| images[i].pow(k).expect("same universe"))
                .clone()
        };

        // Group terms by the multiset of denominator factors they need.
        let mut groups: BTreeMap<Vec<(usize, u32)>, MPoly> = BTreeMap::new();
        for (e, c) in self.terms() {
            let mut num = MPoly::constant(target.clone(), c.clone());
            let mut sig: Vec<(usize, u32)> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k > 0 {
                    num = num.mul(&power(i, k as u32, images))?;
                } else {
                    let img = &images[i];
                    if img.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    // Monomial images invert exactly inside the Laurent ring.
                    if let Some(inv) = invert_monomial(img, target) {
                        num = num.mul(&inv.pow((-k) as u32)?)?;
                    } else {
                        sig.push((i, (-k) as u32));
                    }
                }
            }
            match groups.entry(sig) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(num);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add(&num)?;
                    *o.get_mut() = s;
                }
            }
        }

        let mut acc = RatFn::zero(target.clone());
        for (sig, num) in groups {
            let mut den = MPoly::one(target.clone());
            for (i, k) in sig {
                den = den.mul(&power(i, k, images))?;
            }
            acc = acc.add(&RatFn::new(num, den)?)?;
        }
        Ok(acc)
    }

    /// Substitution by variable name; unbound variables map to themselves.
    pub fn substitute(&self, bindings: &BTreeMap<String, MPoly>) -> Result<RatFn> {
        let u = self.universe().clone();
        for (name, _) in bindings {
            if u.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let mut images = Vec::with_capacity(u.arity());
        for i in 0..u.arity() {
            match bindings.get(u.name(i)) {
                Some(p) => images.push(p.extend_to(&u)?),
                None => images.push(MPoly::var(u.clone(), i)),
            }
        }
        self.substitute_all(&u, &images)
    }
}

impl RatFn {
    pub fn substitute(&self, bindings: &BTreeMap<String, MPoly>) -> Result<RatFn> {
        let num = self.num.substitute(bindings)?;
        let den = self.den.substitute(bindings)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        num.div(&den)
    }

    pub fn substitute_all(&self, target: &Arc<VarUniverse>, images: &[MPoly]) -> Result<RatFn> {
        let num = self.num.substitute_all(target, images)?;
        let den = self.den.substitute_all(target, images)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        num.div(&den)
    }
}

fn invert_monomial(p: &MPoly, target: &Arc<VarUniverse>) -> Option<MPoly> {
    if !p.is_monomial() {
        return None;
    }
    let (e, c) = p.leading()?;
    let inv_e: Expo = e.iter().map(|&x| -x).collect();
    for (i, &x) in inv_e.iter().enumerate() {
        if x < 0 && !target.is_laurent(i) {
            return None;
        }
    }
    let mut out = MPoly::zero(target.clone());
    out.add_term(inv_e, c.recip());
    Some(out)
}
