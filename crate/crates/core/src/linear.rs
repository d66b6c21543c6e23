//! `F_{q^n}` as an `F_q`-vector space: coordinates, rank, the trace-form dual
//! basis and the maps `rho(x) = (Tr(v_i x))_i`, `eta(xs) = sum a_i x_i`.
//!
//! All functions take the extension context; `q` is the order of its immediate
//! base field and `n` its degree.

use thiserror::Error;

use crate::field::{FieldCtx, FieldElement, FieldError};

/// Unvalidated list of elements of `F_{q^n}`.
pub type CandidateSet = Vec<FieldElement>;

/// A vector of base-field coordinates.
pub type CoordVector = Vec<FieldElement>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("elements are not a basis over the base field")]
    NotABasis,
    #[error("trace Gram matrix is singular")]
    SingularGram,
    #[error("expected {expected} elements, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn base_of(ctx: &FieldCtx) -> Result<&FieldCtx, LinearError> {
    ctx.base()
        .ok_or(LinearError::Field(FieldError::NotExtension))
}

/// Coordinates with respect to the power basis `1, t, ..., t^(n-1)`.
pub fn coords_of(ctx: &FieldCtx, x: FieldElement) -> Result<CoordVector, LinearError> {
    ctx.check(x)?;
    base_of(ctx)?;
    Ok(ctx.coords(x))
}

pub fn from_coords(ctx: &FieldCtx, xs: &[FieldElement]) -> Result<FieldElement, LinearError> {
    Ok(ctx.from_coords(xs)?)
}

/// Index of a coordinate tuple in the canonical enumeration of `F_q^n`
/// (low coordinate first). Coincides with the element index of `from_coords`.
pub fn tuple_index(base: &FieldCtx, xs: &[FieldElement]) -> usize {
    let q = base.order() as usize;
    xs.iter()
        .rev()
        .fold(0usize, |acc, c| acc * q + c.index() as usize)
}

pub fn tuple_from_index(base: &FieldCtx, n: usize, mut idx: usize) -> CoordVector {
    let q = base.order() as usize;
    (0..n)
        .map(|_| {
            let c = idx % q;
            idx /= q;
            base.element(c as u32)
        })
        .collect()
}

/// Row-reduces in place and returns the rank.
fn row_reduce(base: &FieldCtx, rows: &mut [Vec<FieldElement>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = base.inv(rows[rank][col]).expect("nonzero pivot");
        for c in rows[rank].iter_mut() {
            *c = base.mul(*c, inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in 0..ncols {
                    let t = base.mul(factor, rows[rank][c]);
                    rows[r][c] = base.sub(rows[r][c], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension over the base field of the span of `cand`.
pub fn rank(ctx: &FieldCtx, cand: &[FieldElement]) -> Result<usize, LinearError> {
    let base = base_of(ctx)?;
    let mut rows = cand
        .iter()
        .map(|&x| {
            ctx.check(x)?;
            Ok(ctx.coords(x))
        })
        .collect::<Result<Vec<_>, LinearError>>()?;
    Ok(row_reduce(base, &mut rows))
}

/// Gaussian elimination rank test. The empty set counts as independent.
pub fn is_linearly_independent(ctx: &FieldCtx, cand: &[FieldElement]) -> Result<bool, LinearError> {
    Ok(rank(ctx, cand)? == cand.len())
}

/// For `n = 2`: nonzero `a1, a2` are independent iff `(a2/a1)^(q-1) != 1`.
pub fn ratio_test(ctx: &FieldCtx, a1: FieldElement, a2: FieldElement) -> Result<bool, LinearError> {
    let r = ctx.div(a2, a1)?;
    let q = ctx.base_order() as u64;
    Ok(ctx.pow(r, q - 1) != ctx.one())
}

/// Inverse of a square matrix over `base`, or `None` if singular.
pub fn invert_matrix(base: &FieldCtx, m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = m.len();
    let mut aug: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { base.one() } else { base.zero() }));
            r
        })
        .collect();
    // pivot only over the left block
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = base.inv(aug[col][col]).ok()?;
        for c in aug[col].iter_mut() {
            *c = base.mul(*c, inv);
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col];
                for c in 0..2 * n {
                    let t = base.mul(factor, aug[col][c]);
                    aug[r][c] = base.sub(aug[r][c], t);
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `(Tr(c_1 x), ..., Tr(c_k x))` for any list `c`.
pub fn trace_vector(
    ctx: &FieldCtx,
    c: &[FieldElement],
    x: FieldElement,
) -> Result<CoordVector, LinearError> {
    ctx.check(x)?;
    c.iter()
        .map(|&ci| {
            ctx.check(ci)?;
            Ok(ctx.trace(ctx.mul(ci, x))?)
        })
        .collect()
}

/// Trace-form dual of `v` computed against the power basis. `Err(SingularGram)`
/// when `v` is not a basis.
pub fn dual_of(ctx: &FieldCtx, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinearError> {
    let base = base_of(ctx)?;
    let n = ctx.degree() as usize;
    if v.len() != n {
        return Err(LinearError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let t = ctx.adjoined_root()?;
    let powers: Vec<FieldElement> = (0..n as u64).map(|k| ctx.pow(t, k)).collect();
    // gram[i][k] = Tr(v_i t^k)
    let gram = v
        .iter()
        .map(|&vi| trace_vector(ctx, &powers, vi))
        .collect::<Result<Vec<_>, _>>()?;
    let inv = invert_matrix(base, &gram).ok_or(LinearError::SingularGram)?;
    // u_j = sum_k inv[k][j] t^k
    Ok((0..n)
        .map(|j| {
            let coords: Vec<FieldElement> = (0..n).map(|k| inv[k][j]).collect();
            ctx.from_coords(&coords).expect("dimension checked")
        })
        .collect())
}

/// A validated ordered basis of `F_{q^n}` over `F_q`, together with its dual.
#[derive(Clone, Debug)]
pub struct Basis {
    ctx: FieldCtx,
    elems: Vec<FieldElement>,
    dual: Vec<FieldElement>,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.elems == other.elems
    }
}

impl Eq for Basis {}

impl Basis {
    pub fn new(ctx: &FieldCtx, elems: Vec<FieldElement>) -> Result<Self, LinearError> {
        let n = ctx.degree() as usize;
        base_of(ctx)?;
        if elems.len() != n {
            return Err(LinearError::DimensionMismatch {
                expected: n,
                got: elems.len(),
            });
        }
        if !is_linearly_independent(ctx, &elems)? {
            return Err(LinearError::NotABasis);
        }
        let dual = dual_of(ctx, &elems)?;
        Ok(Basis {
            ctx: ctx.clone(),
            elems,
            dual,
        })
    }

    /// `1, t, ..., t^(n-1)`.
    pub fn power(ctx: &FieldCtx) -> Result<Self, LinearError> {
        let t = ctx.adjoined_root()?;
        let elems = (0..ctx.degree() as u64).map(|k| ctx.pow(t, k)).collect();
        Self::new(ctx, elems)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn elems(&self) -> &[FieldElement] {
        &self.elems
    }

    pub fn dual_elems(&self) -> &[FieldElement] {
        &self.dual
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn dual(&self) -> Basis {
        Basis::new(&self.ctx, self.dual.clone()).expect("dual of a basis is a basis")
    }
}

/// The ordered dual basis `u` with `Tr(v_i u_j) = delta_ij`.
pub fn dual_basis(v: &Basis) -> Basis {
    v.dual()
}

/// `rho(x) = (Tr(v_1 x), ..., Tr(v_n x))`. Defined for any candidate set.
pub fn rho(
    ctx: &FieldCtx,
    v: &[FieldElement],
    x: FieldElement,
) -> Result<CoordVector, LinearError> {
    trace_vector(ctx, v, x)
}

/// `u_1 x_1 + ... + u_n x_n` with `u` the dual of `v`.
pub fn rho_inverse(v: &Basis, xs: &[FieldElement]) -> Result<FieldElement, LinearError> {
    eta(&v.ctx, &v.dual, xs)
}

/// `a_1 x_1 + ... + a_n x_n`. Defined for any candidate set.
pub fn eta(
    ctx: &FieldCtx,
    a: &[FieldElement],
    xs: &[FieldElement],
) -> Result<FieldElement, LinearError> {
    if a.len() != xs.len() {
        return Err(LinearError::DimensionMismatch {
            expected: a.len(),
            got: xs.len(),
        });
    }
    let mut acc = ctx.zero();
    for (&ai, &xi) in a.iter().zip(xs) {
        ctx.check(ai)?;
        let xi = ctx.embed(xi)?;
        acc = ctx.add(acc, ctx.mul(ai, xi));
    }
    Ok(acc)
}

/// `(Tr(b_1 x), ..., Tr(b_n x))` with `b` the dual of `a`.
pub fn eta_inverse(a: &Basis, x: FieldElement) -> Result<CoordVector, LinearError> {
    trace_vector(&a.ctx, &a.dual, x)
}

/// All `x` with `Tr(c x) = 0` for every `c` in `cand`, by exhaustive scan.
pub fn kernel_of_trace_maps(
    ctx: &FieldCtx,
    cand: &[FieldElement],
) -> Result<Vec<FieldElement>, LinearError> {
    let mut out = Vec::new();
    for x in ctx.elements() {
        if trace_vector(ctx, cand, x)?.iter().all(|c| c.is_zero()) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Tuple-index table of `rho` over the whole field: entry `x.index()` is the
/// tuple index of `rho(v, x)`.
pub fn rho_table(ctx: &FieldCtx, v: &[FieldElement]) -> Result<Vec<u32>, LinearError> {
    let base = base_of(ctx)?;
    ctx.elements()
        .map(|x| Ok(tuple_index(base, &rho(ctx, v, x)?) as u32))
        .collect()
}

/// Element-index table of `eta` over all of `F_q^n` in tuple order.
pub fn eta_table(ctx: &FieldCtx, a: &[FieldElement]) -> Result<Vec<u32>, LinearError> {
    let base = base_of(ctx)?;
    let total = (base.order() as usize).pow(a.len() as u32);
    (0..total)
        .map(|i| Ok(eta(ctx, a, &tuple_from_index(base, a.len(), i))?.index()))
        .collect()
}

/// Checks that every `F_q`-linear map `F_{q^n} -> F_q` has the form
/// `x -> Tr(v x)` for exactly one `v`.
///
/// When the full function space `q^(q^n)` is at most `2^20` every function is
/// enumerated and the linear ones are filtered out; otherwise linear maps are
/// enumerated through their values on the power basis. Returns the number of
/// linear maps found.
pub fn verify_trace_representation(ctx: &FieldCtx) -> Result<Option<u64>, LinearError> {
    let base = base_of(ctx)?;
    let q = base.order() as u64;
    let big_q = ctx.order() as u64;
    let n = ctx.degree() as usize;
    // trace form of each v, as a table of base indices
    let forms: Vec<Vec<u32>> = ctx
        .elements()
        .map(|v| {
            ctx.elements()
                .map(|x| ctx.trace(ctx.mul(v, x)).map(|t| t.index()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut sorted = forms.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != forms.len() {
        return Ok(None);
    }
    let is_linear = |table: &[u32]| {
        ctx.elements().all(|x| {
            ctx.elements().all(|y| {
                let s = ctx.add(x, y).index() as usize;
                base.add(
                    base.element(table[x.index() as usize]),
                    base.element(table[y.index() as usize]),
                )
                .index()
                    == table[s]
            })
        }) && base.elements().all(|c| {
            let ce = ctx.embed(c).unwrap();
            ctx.elements().all(|x| {
                let cx = ctx.mul(ce, x).index() as usize;
                base.mul(c, base.element(table[x.index() as usize])).index() == table[cx]
            })
        })
    };
    let total_fns = (q as u128).checked_pow(big_q as u32);
    let mut found = 0u64;
    if total_fns.is_some_and(|t| t <= 1 << 20) {
        let total = total_fns.unwrap() as u64;
        let mut table = vec![0u32; big_q as usize];
        for code in 0..total {
            let mut c = code;
            for slot in table.iter_mut() {
                *slot = (c % q) as u32;
                c /= q;
            }
            if is_linear(&table) {
                if sorted.binary_search(&table).is_err() {
                    return Ok(None);
                }
                found += 1;
            }
        }
    } else {
        for code in 0..q.pow(n as u32) {
            let images = tuple_from_index(base, n, code as usize);
            // the linear map determined by its values on the power basis
            let table: Vec<u32> = ctx
                .elements()
                .map(|x| {
                    let cs = ctx.coords(x);
                    let mut acc = base.zero();
                    for (ci, yi) in cs.iter().zip(&images) {
                        acc = base.add(acc, base.mul(*ci, *yi));
                    }
                    acc.index()
                })
                .collect();
            if sorted.binary_search(&table).is_err() {
                return Ok(None);
            }
            found += 1;
        }
    }
    Ok((found == big_q).then_some(found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_CAP;

    fn f9() -> FieldCtx {
        FieldCtx::quadratic_over(3, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn power_basis_coordinates() {
        let f = FieldCtx::quadratic_over(5, DEFAULT_CAP).unwrap();
        let t = f.adjoined_root().unwrap();
        let c: Vec<u32> = coords_of(&f, t)
            .unwrap()
            .iter()
            .map(|c| c.index())
            .collect();
        assert_eq!(c, vec![0, 1]);
        assert!(coords_of(&f, f.zero()).unwrap().iter().all(|c| c.is_zero()));
        assert!(is_linearly_independent(&f, &[f.one(), t]).unwrap());
        assert!(is_linearly_independent(&f, &[]).unwrap());
        let c2 = f.from_int(2);
        assert!(!is_linearly_independent(&f, &[t, f.mul(c2, t)]).unwrap());
    }

    #[test]
    fn ratio_and_rank_agree_f9() {
        let f = f9();
        for a in f.nonzero_elements() {
            for b in f.nonzero_elements() {
                assert_eq!(
                    ratio_test(&f, a, b).unwrap(),
                    is_linearly_independent(&f, &[a, b]).unwrap()
                );
            }
        }
    }

    #[test]
    fn dual_properties_f9() {
        let f = f9();
        let base = f.base().unwrap().clone();
        let mut count = 0;
        for a in f.elements() {
            for b in f.elements() {
                let Ok(v) = Basis::new(&f, vec![a, b]) else {
                    continue;
                };
                count += 1;
                let u = dual_basis(&v);
                for (i, &vi) in v.elems().iter().enumerate() {
                    for (j, &uj) in u.elems().iter().enumerate() {
                        let tr = f.trace(f.mul(vi, uj)).unwrap();
                        assert_eq!(tr, if i == j { base.one() } else { base.zero() });
                    }
                }
                assert_eq!(dual_basis(&u), v);
            }
        }
        assert_eq!(count, 48);
    }

    #[test]
    fn singular_gram_for_dependent_set() {
        let f = f9();
        assert_eq!(
            dual_of(&f, &[f.one(), f.one()]).unwrap_err(),
            LinearError::SingularGram
        );
        assert_eq!(
            Basis::new(&f, vec![f.one(), f.one()]).unwrap_err(),
            LinearError::NotABasis
        );
    }

    #[test]
    fn self_dual_basis_in_f4() {
        let f = FieldCtx::quadratic_over(2, DEFAULT_CAP).unwrap();
        let mut found = None;
        for a in f.elements() {
            for b in f.elements() {
                if let Ok(v) = Basis::new(&f, vec![a, b]) {
                    if v.dual_elems() == v.elems() {
                        found = Some(v);
                    }
                }
            }
        }
        let v = found.expect("F_4 has a self-dual basis");
        assert_eq!(dual_basis(&v), v);
    }

    #[test]
    fn rho_eta_round_trips_f9() {
        let f = f9();
        let base = f.base().unwrap().clone();
        let v = Basis::power(&f).unwrap();
        let u = dual_basis(&v);
        for x in f.elements() {
            let xs = rho(&f, v.elems(), x).unwrap();
            assert_eq!(rho_inverse(&v, &xs).unwrap(), x);
            // with the dual of the power basis, rho gives plain coordinates
            assert_eq!(rho(&f, u.elems(), x).unwrap(), coords_of(&f, x).unwrap());
            let ys = eta_inverse(&v, x).unwrap();
            assert_eq!(eta(&f, v.elems(), &ys).unwrap(), x);
        }
        for i in 0..2 {
            let e: Vec<_> = (0..2)
                .map(|j| if i == j { base.one() } else { base.zero() })
                .collect();
            assert_eq!(eta(&f, v.elems(), &e).unwrap(), v.elems()[i]);
            assert_eq!(rho_inverse(&v, &e).unwrap(), u.elems()[i]);
            assert_eq!(eta_inverse(&v, v.elems()[i]).unwrap(), e);
        }
    }

    #[test]
    fn kernels() {
        let f = f9();
        let v = Basis::power(&f).unwrap();
        assert_eq!(kernel_of_trace_maps(&f, v.elems()).unwrap(), vec![f.zero()]);
        let x = f.generator();
        let cx = f.mul(f.from_int(2), x);
        assert_eq!(kernel_of_trace_maps(&f, &[x, cx]).unwrap().len(), 3);
        assert_eq!(kernel_of_trace_maps(&f, &[f.zero()]).unwrap().len(), 9);
    }

    #[test]
    fn dependent_eta_collides_f4() {
        let f = FieldCtx::quadratic_over(2, DEFAULT_CAP).unwrap();
        let t = eta_table(&f, &[f.one(), f.one()]).unwrap();
        let mut s = t.clone();
        s.sort();
        s.dedup();
        assert!(s.len() < t.len());
    }

    #[test]
    fn trace_representation_small_fields() {
        for q in [2, 3, 4] {
            let f = FieldCtx::quadratic_over(q, DEFAULT_CAP).unwrap();
            assert_eq!(verify_trace_representation(&f).unwrap(), Some(q * q));
        }
    }
}
