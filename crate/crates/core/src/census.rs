//! Graded dimension census: evidence that the wheel conditions cut out
//! exactly the subalgebra generated by single-variable elements.
//!
//! Both spaces are filtered by total alphabet degree, and the census reports
//! the marginal dimension at a given degree: the dimension of the image of
//! the degree-filtered piece in the associated graded quotient (equivalently
//! the space of top-degree parts of elements of alphabet degree exactly
//! `degree`). Containment of the subalgebra in the wheel space then forces
//! `subalg_dim <= wheel_dim` at every degree, so the inequality is a
//! structural invariant while equality is the interesting finding.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;

use crate::error::{Error, Result};
use crate::mpoly::{Coeff, MPoly};
use crate::product::sym_kernel_single_vertex;
use crate::quiver::{make_universe, DimVector, Quiver};
use crate::solver::{poly_matrix_rank, SolverLimits};
use crate::universe::{Flavor, VarUniverse};
use crate::wheel::wheel_substitutions;

/// Marginal dimensions `(wheel_dim, subalg_dim)` at the given alphabet
/// degree, over the fraction field of the parameter ring. Single-vertex
/// dimension vectors only (products of single-variable generators live
/// there).
pub fn graded_dimension_census(
    q: &Quiver,
    dim: &DimVector,
    degree: i32,
    limits: SolverLimits,
) -> Result<(usize, usize)> {
    if degree < 0 {
        return Ok((0, 0));
    }
    if dim.is_zero() {
        // Only the scalars in degree 0.
        let d = usize::from(degree == 0);
        return Ok((d, d));
    }
    let (vid, n) = dim.single_vertex().ok_or(Error::MultiVertexTarget)?;
    let vi = q.vertex_index(vid)?;
    let u = make_universe(q, dim, Flavor::Cohomological)?;

    let left = wheel_space_dim(q, &u, vi, n, degree, limits)?
        - wheel_space_dim(q, &u, vi, n, degree - 1, limits)?;
    let right = subalg_marginal_dim(q, &u, vi, degree, limits)?;
    Ok((left, right))
}

/// Dimension over the parameter fraction field of the symmetric polynomials
/// of alphabet degree <= cap satisfying every wheel condition.
fn wheel_space_dim(
    q: &Quiver,
    u: &Arc<VarUniverse>,
    vi: usize,
    n: u32,
    cap: i32,
    limits: SolverLimits,
) -> Result<usize> {
    if cap < 0 {
        return Ok(0);
    }
    let slots = u.vertex_slots(vi);
    let basis = monomial_symmetric_basis(u, &slots, n, cap)?;
    if basis.len() > limits.max_unknowns {
        return Err(Error::ResourceCap(format!(
            "census wheel basis needs {} columns (cap {})",
            basis.len(),
            limits.max_unknowns
        )));
    }
    let subs = wheel_substitutions(Flavor::Cohomological, q, u)?;
    if subs.is_empty() {
        return Ok(basis.len());
    }
    // One constraint block per substitution; rows are the alphabet
    // monomials of the substituted images, entries their parameter-
    // polynomial coefficients.
    let mut row_index: BTreeMap<(usize, Vec<i32>), usize> = BTreeMap::new();
    let mut images: Vec<Vec<MPoly>> = Vec::with_capacity(basis.len());
    for m in &basis {
        let mut per_sub = Vec::with_capacity(subs.len());
        for (si, (_, bindings)) in subs.iter().enumerate() {
            let img = m
                .substitute(bindings)?
                .to_mpoly()
                .ok_or_else(|| Error::Parse("wheel substitution must stay polynomial".into()))?;
            for (e, _) in img.terms() {
                let key = (si, slot_part(e, &slots));
                let next = row_index.len();
                row_index.entry(key).or_insert(next);
            }
            per_sub.push(img);
        }
        images.push(per_sub);
    }
    let rows = row_index.len();
    let zero = MPoly::zero(u.clone());
    let mut a = vec![vec![zero.clone(); basis.len()]; rows];
    for (j, per_sub) in images.iter().enumerate() {
        for (si, img) in per_sub.iter().enumerate() {
            for ((s, mexp), &i) in row_index.range((si, Vec::new())..(si + 1, Vec::new())) {
                debug_assert_eq!(*s, si);
                let c = slot_coefficient(img, &slots, mexp);
                if !c.is_zero() {
                    a[i][j] = c;
                }
            }
        }
    }
    let rank = poly_matrix_rank(a)?;
    Ok(basis.len() - rank)
}

/// Marginal dimension at the given alphabet degree of the span of
/// symmetrized generator monomials, intersected with the degree filtration.
///
/// With `A` the coefficient matrix of the span's generators (rows indexed
/// by alphabet monomials) and `A_{>c}` its restriction to rows of alphabet
/// degree > c, the filtered dimension is
/// `dim S_{<=c} = rank(A) - rank(A_{>c})`, so the marginal dimension at
/// `degree` is `rank(A_{>degree-1}) - rank(A_{>degree})`. Top-degree
/// cancellations mean generator exponents above the degree can still
/// contribute: already at two slots an antisymmetric numerator of degree
/// `degree + 1` produces a contribution of degree `degree`. The generator
/// cap therefore always grows to at least `degree + 2` and then keeps
/// growing until the answer stabilizes twice in a row, an engineering
/// bound in the absence of an effective one.
fn subalg_marginal_dim(
    q: &Quiver,
    u: &Arc<VarUniverse>,
    vi: usize,
    degree: i32,
    limits: SolverLimits,
) -> Result<usize> {
    let slots = u.vertex_slots(vi);
    let min_cap = degree + 2;

    let mut ech = Echelon::default();
    let mut cols = 0usize;
    let mut cached_cap = -1i32;
    let mut last: Option<usize> = None;
    let mut stable = 0usize;
    let rounds = limits.widen_rounds + 4;
    for extra in 0..=(rounds + 1) {
        let mu_cap = min_cap - 1 + extra;
        // Extend the echelon form with the generator columns of the new cap.
        let trace = std::env::var("COHA_SOLVER_TRACE").is_ok();
        let t0 = std::time::Instant::now();
        for d in (cached_cap + 1)..=mu_cap {
            let mut mus = Vec::new();
            enumerate_degree(slots.len(), d, &mut mus);
            for mu in mus {
                cols += 1;
                if cols > limits.max_unknowns {
                    return Err(Error::ResourceCap(format!(
                        "census subalgebra span needs {cols} columns (cap {})",
                        limits.max_unknowns
                    )));
                }
                let mut e = vec![0; u.arity()];
                for (k, &s) in slots.iter().enumerate() {
                    e[s] = mu[k];
                }
                let mono = MPoly::from_terms(u.clone(), [(e, Coeff::one())])?;
                let s = sym_kernel_single_vertex(&mono, Flavor::Cohomological, q, vi)?;
                if !s.is_zero() {
                    ech.insert(sparse_column(&s, &slots)?)?;
                }
            }
        }
        cached_cap = mu_cap;
        let value = ech.leads_at_degree(degree);
        if trace {
            eprintln!(
                "[census] cap {mu_cap}: {cols} cols, rank {}, marginal {value} (+{:?})",
                ech.len(),
                t0.elapsed()
            );
        }
        if mu_cap < min_cap {
            last = Some(value);
            stable = 0;
            continue;
        }
        if last == Some(value) {
            stable += 1;
            if stable >= 2 {
                return Ok(value);
            }
        } else {
            stable = 0;
        }
        last = Some(value);
    }
    Ok(last.unwrap_or(0))
}

/// Row key ordering rows by total alphabet degree descending, then
/// lexicographically descending: both components are negated so the natural
/// tuple order does the right thing.
type RowKey = (i32, Vec<i32>);

/// A matrix column as a sparse map from row keys to parameter-polynomial
/// entries.
type SparseCol = BTreeMap<RowKey, MPoly>;

/// Incremental column echelon form over the parameter fraction field.
///
/// Stored vectors are primitive (entries divided by their common gcd) and
/// have pairwise distinct leading row keys. Because the row order puts high
/// alphabet degrees first, a vector leading at degree d vanishes on all
/// rows of degree > d, so the rank of the submatrix of rows of degree > c
/// is exactly the number of stored vectors leading at degree > c — every
/// filtered rank is read off the same echelon, and columns only ever need
/// to be inserted once.
///
/// The column set here is "morally triangular": a symmetrized generator
/// monomial usually leads at its own staircase row, so most insertions
/// terminate after reducing against a handful of same-partition columns.
#[derive(Default)]
struct Echelon {
    vecs: BTreeMap<RowKey, SparseCol>,
}

impl Echelon {
    fn len(&self) -> usize {
        self.vecs.len()
    }

    /// Number of stored vectors leading at exactly this alphabet degree:
    /// the marginal rank contribution of the degree.
    fn leads_at_degree(&self, degree: i32) -> usize {
        self.vecs.keys().filter(|(nd, _)| -nd == degree).count()
    }

    /// Reduce against the stored vectors and insert if independent;
    /// returns whether the column enlarged the span.
    fn insert(&mut self, mut v: SparseCol) -> Result<bool> {
        loop {
            let Some(lead) = v.keys().next().cloned() else {
                return Ok(false);
            };
            let Some(e) = self.vecs.get(&lead) else {
                make_primitive(&mut v)?;
                self.vecs.insert(lead, v);
                return Ok(true);
            };
            // v <- v * e_lead - e * v_lead, clearing the lead row.
            let ce = e[&lead].clone();
            let cv = v[&lead].clone();
            let mut w: SparseCol = BTreeMap::new();
            for (k, p) in &v {
                w.insert(k.clone(), p.mul(&ce)?);
            }
            for (k, p) in e {
                let t = p.mul(&cv)?;
                let r = match w.remove(k) {
                    Some(x) => x.sub(&t)?,
                    None => t.neg(),
                };
                if !r.is_zero() {
                    w.insert(k.clone(), r);
                }
            }
            debug_assert!(!w.contains_key(&lead));
            make_primitive(&mut w)?;
            v = w;
        }
    }
}

/// Divide all entries by their common polynomial gcd.
fn make_primitive(v: &mut SparseCol) -> Result<()> {
    let mut g: Option<MPoly> = None;
    for p in v.values() {
        g = Some(match g {
            None => p.clone(),
            Some(acc) => acc.gcd(p)?,
        });
        if g
            .as_ref()
            .is_some_and(|g| g.num_terms() == 1 && g.total_degree() == Some(0))
        {
            return Ok(());
        }
    }
    if let Some(g) = g {
        for p in v.values_mut() {
            *p = p.div_exact(&g).expect("gcd divides every entry");
        }
    }
    Ok(())
}

/// Split a polynomial into a sparse column over row keys: entries are the
/// parameter-polynomial coefficients of each alphabet monomial.
fn sparse_column(p: &MPoly, slots: &[usize]) -> Result<SparseCol> {
    let u = p.universe().clone();
    let mut groups: BTreeMap<RowKey, Vec<(Vec<i32>, Coeff)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let sp = slot_part(e, slots);
        let deg: i32 = sp.iter().sum();
        let key = (-deg, sp.iter().map(|&x| -x).collect());
        let mut ex = e.clone();
        for &s in slots {
            ex[s] = 0;
        }
        groups.entry(key).or_default().push((ex, c.clone()));
    }
    let mut out = SparseCol::new();
    for (k, terms) in groups {
        let q = MPoly::from_terms(u.clone(), terms)?;
        if !q.is_zero() {
            out.insert(k, q);
        }
    }
    Ok(out)
}

/// Monomial symmetric polynomials `m_lambda` for partitions of size <= cap
/// with at most n parts: the canonical basis of the symmetric span.
fn monomial_symmetric_basis(
    u: &Arc<VarUniverse>,
    slots: &[usize],
    n: u32,
    cap: i32,
) -> Result<Vec<MPoly>> {
    let mut out = Vec::new();
    for total in 0..=cap {
        for lam in partitions(total, n as usize) {
            let mut padded = lam.clone();
            padded.resize(slots.len(), 0);
            let mut perms = std::collections::BTreeSet::new();
            permute_into(&mut padded.clone(), 0, &mut perms);
            let terms = perms.into_iter().map(|p| {
                let mut e = vec![0; u.arity()];
                for (k, &s) in slots.iter().enumerate() {
                    e[s] = p[k];
                }
                (e, Coeff::one())
            });
            out.push(MPoly::from_terms(u.clone(), terms)?);
        }
    }
    Ok(out)
}

fn partitions(total: i32, max_parts: usize) -> Vec<Vec<i32>> {
    fn rec(rest: i32, max_part: i32, left: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for p in (1..=rest.min(max_part)).rev() {
            cur.push(p);
            rec(rest - p, p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All distinct permutations of `v`, collected into `out`.
fn permute_into(v: &mut Vec<i32>, k: usize, out: &mut std::collections::BTreeSet<Vec<i32>>) {
    if k == v.len() {
        out.insert(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_into(v, k + 1, out);
        v.swap(k, i);
    }
}

fn slot_part(e: &[i32], slots: &[usize]) -> Vec<i32> {
    slots.iter().map(|&s| e[s]).collect()
}

fn slot_coefficient(p: &MPoly, slots: &[usize], m: &[i32]) -> MPoly {
    let terms = p.terms().filter_map(|(e, c)| {
        if slot_part(e, slots) == m {
            let mut ex = e.clone();
            for &s in slots {
                ex[s] = 0;
            }
            Some((ex, c.clone()))
        } else {
            None
        }
    });
    MPoly::from_terms(p.universe().clone(), terms).expect("valid exponents")
}

fn enumerate_degree(arity: usize, degree: i32, out: &mut Vec<Vec<i32>>) {
    fn rec(arity: usize, pos: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if pos == arity - 1 {
            cur[pos] = left;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(arity, pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    if arity == 0 {
        return;
    }
    let mut cur = vec![0; arity];
    rec(arity, 0, degree, &mut cur, out);
}
