//! The composition `F = eta o g o rho o f` and the constructions built on it.
//!
//! Vector maps on `F_q^n` are stored as tables over the canonical tuple order
//! (first coordinate least significant), which is also the element order of
//! `F_{q^n}` under [`crate::linear::coords_of`].

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{gcd, FieldCtx, FieldElement, FieldError};
use crate::linear::{
    eta_table, is_linearly_independent, rho_table, tuple_from_index, tuple_index, Basis,
    LinearError,
};
use crate::poly::{FnTable, PolyError, SparsePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameworkError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("f is not a permutation")]
    NotPermutation,
    #[error("component h_{0} is not a permutation of the base field")]
    ComponentNotPermutation(usize),
    #[error("vector map table is invalid")]
    BadTable,
}

/// A map `F_q^n -> F_q^n` stored as a table of tuple indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorMap {
    base: FieldCtx,
    n: usize,
    table: Vec<u32>,
}

impl VectorMap {
    pub fn new(base: &FieldCtx, n: usize, table: Vec<u32>) -> Result<Self, FrameworkError> {
        let size = (base.order() as usize).pow(n as u32);
        if table.len() != size || table.iter().any(|&t| t as usize >= size) {
            return Err(FrameworkError::BadTable);
        }
        Ok(VectorMap {
            base: base.clone(),
            n,
            table,
        })
    }

    pub fn from_fn(
        base: &FieldCtx,
        n: usize,
        f: impl Fn(&[FieldElement]) -> Vec<FieldElement>,
    ) -> Self {
        let size = (base.order() as usize).pow(n as u32);
        let table = (0..size)
            .map(|i| {
                let ys = f(&tuple_from_index(base, n, i));
                tuple_index(base, &ys) as u32
            })
            .collect();
        VectorMap {
            base: base.clone(),
            n,
            table,
        }
    }

    pub fn identity(base: &FieldCtx, n: usize) -> Self {
        let size = base.order().pow(n as u32);
        VectorMap {
            base: base.clone(),
            n,
            table: (0..size).collect(),
        }
    }

    pub fn constant(base: &FieldCtx, n: usize, value: &[FieldElement]) -> Self {
        let size = (base.order() as usize).pow(n as u32);
        let v = tuple_index(base, value) as u32;
        VectorMap {
            base: base.clone(),
            n,
            table: vec![v; size],
        }
    }

    pub fn random_permutation(base: &FieldCtx, n: usize, rng: &mut impl Rng) -> Self {
        let mut g = Self::identity(base, n);
        g.table.shuffle(rng);
        g
    }

    pub fn random_map(base: &FieldCtx, n: usize, rng: &mut impl Rng) -> Self {
        let size = base.order().pow(n as u32);
        VectorMap {
            base: base.clone(),
            n,
            table: (0..size).map(|_| rng.gen_range(0..size)).collect(),
        }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, xs: &[FieldElement]) -> Vec<FieldElement> {
        let i = tuple_index(&self.base, xs);
        tuple_from_index(&self.base, self.n, self.table[i] as usize)
    }

    pub fn is_permutation(&self) -> bool {
        is_permutation_indices(&self.table)
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &VectorMap) -> Result<VectorMap, FrameworkError> {
        self.same_shape(inner)?;
        Ok(VectorMap {
            base: self.base.clone(),
            n: self.n,
            table: inner
                .table
                .iter()
                .map(|&y| self.table[y as usize])
                .collect(),
        })
    }

    /// Pointwise sum.
    pub fn add(&self, other: &VectorMap) -> Result<VectorMap, FrameworkError> {
        self.same_shape(other)?;
        let base = &self.base;
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&a, &b)| {
                let xa = tuple_from_index(base, self.n, a as usize);
                let xb = tuple_from_index(base, self.n, b as usize);
                let s: Vec<_> = xa.iter().zip(&xb).map(|(&u, &w)| base.add(u, w)).collect();
                tuple_index(base, &s) as u32
            })
            .collect();
        Ok(VectorMap {
            base: base.clone(),
            n: self.n,
            table,
        })
    }

    /// Pointwise scaling of every output coordinate by `c` in `F_q`.
    pub fn scale(&self, c: FieldElement) -> Result<VectorMap, FrameworkError> {
        self.base.check(c)?;
        let base = &self.base;
        let table = self
            .table
            .iter()
            .map(|&a| {
                let xa = tuple_from_index(base, self.n, a as usize);
                let s: Vec<_> = xa.iter().map(|&u| base.mul(c, u)).collect();
                tuple_index(base, &s) as u32
            })
            .collect();
        Ok(VectorMap {
            base: base.clone(),
            n: self.n,
            table,
        })
    }

    fn same_shape(&self, other: &VectorMap) -> Result<(), FrameworkError> {
        if self.base != other.base {
            return Err(FieldError::CtxMismatch.into());
        }
        if self.n != other.n {
            return Err(FrameworkError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }
}

/// Distinctness test over a table of indices in `0..len`.
pub fn is_permutation_indices(table: &[u32]) -> bool {
    let mut seen = vec![false; table.len()];
    for &t in table {
        let s = &mut seen[t as usize];
        if *s {
            return false;
        }
        *s = true;
    }
    true
}

/// Univariate components `h_i` over `F_q`, with optional triangular shifts.
///
/// `shifts[i]`, when present, is a table over `F_q^i` (tuple order) giving
/// `g_i(x_1, ..., x_i)`; the first shift is a constant.
#[derive(Clone, Debug)]
pub struct ComponentPerms {
    pub h: Vec<SparsePoly>,
    pub shifts: Vec<Option<Vec<FieldElement>>>,
}

impl ComponentPerms {
    pub fn new(h: Vec<SparsePoly>) -> Self {
        let shifts = vec![None; h.len()];
        ComponentPerms { h, shifts }
    }

    pub fn with_shifts(h: Vec<SparsePoly>, shifts: Vec<Option<Vec<FieldElement>>>) -> Self {
        ComponentPerms { h, shifts }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), FrameworkError> {
    if expected != got {
        return Err(FrameworkError::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn base_of(ctx: &FieldCtx) -> Result<&FieldCtx, FrameworkError> {
    ctx.base()
        .ok_or(FrameworkError::Field(FieldError::NotExtension))
}

/// Table of `x -> eta(a, g(rho(v, f(x))))`.
pub fn compose_ast(
    ctx: &FieldCtx,
    f: &FnTable,
    v: &[FieldElement],
    g: &VectorMap,
    a: &[FieldElement],
) -> Result<FnTable, FrameworkError> {
    let n = ctx.degree() as usize;
    check_dim(n, v.len())?;
    check_dim(n, a.len())?;
    check_dim(n, g.n)?;
    if f.ctx() != ctx || g.base() != base_of(ctx)? {
        return Err(FieldError::CtxMismatch.into());
    }
    let rt = rho_table(ctx, v)?;
    let et = eta_table(ctx, a)?;
    let out: Vec<u32> = f
        .values()
        .iter()
        .map(|y| et[g.table[rt[y.index() as usize] as usize] as usize])
        .collect();
    Ok(FnTable::from_indices(ctx, &out))
}

/// `(v is a basis, a is a basis, g permutes F_q^n)`.
pub fn check_ast_conditions(
    ctx: &FieldCtx,
    v: &[FieldElement],
    a: &[FieldElement],
    g: &VectorMap,
) -> Result<(bool, bool, bool), FrameworkError> {
    let n = ctx.degree() as usize;
    check_dim(n, v.len())?;
    check_dim(n, a.len())?;
    check_dim(n, g.n)?;
    Ok((
        is_linearly_independent(ctx, v)?,
        is_linearly_independent(ctx, a)?,
        g.is_permutation(),
    ))
}

/// Whether the permutation verdict on the composition equals the conjunction
/// of the three conditions.
pub fn ast_equivalence_check(
    ctx: &FieldCtx,
    f: &FnTable,
    v: &[FieldElement],
    a: &[FieldElement],
    g: &VectorMap,
) -> Result<bool, FrameworkError> {
    if !f.is_permutation() {
        return Err(FrameworkError::NotPermutation);
    }
    let (cv, ca, cg) = check_ast_conditions(ctx, v, a, g)?;
    let composed = compose_ast(ctx, f, v, g, a)?;
    Ok(composed.is_permutation() == (cv && ca && cg))
}

/// One failing configuration from [`ast_property_sweep`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AstCounterexample {
    pub f_index: usize,
    pub v: Vec<FieldElement>,
    pub a: Vec<FieldElement>,
    pub g_index: usize,
    pub predicted: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AstSweepSummary {
    pub checks: u64,
    pub predicted_permutations: u64,
    pub counterexamples: Vec<AstCounterexample>,
}

/// Every ordered `n`-tuple of elements of the field.
pub fn all_candidate_sets(ctx: &FieldCtx) -> Vec<Vec<FieldElement>> {
    let n = ctx.degree() as usize;
    let size = (ctx.order() as usize).pow(n as u32);
    (0..size)
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let c = i % ctx.order() as usize;
                    i /= ctx.order() as usize;
                    ctx.element(c as u32)
                })
                .collect()
        })
        .collect()
}

/// Checks the equivalence for every `(f, v, a, g)` with `v`, `a` ranging over
/// all candidate sets and `f`, `g` over the given lists.
pub fn ast_property_sweep(
    ctx: &FieldCtx,
    fs: &[FnTable],
    gs: &[VectorMap],
    exec: Exec,
) -> Result<AstSweepSummary, FrameworkError> {
    for f in fs {
        if !f.is_permutation() {
            return Err(FrameworkError::NotPermutation);
        }
    }
    let cands = all_candidate_sets(ctx);
    let rhos = cands
        .iter()
        .map(|v| rho_table(ctx, v))
        .collect::<Result<Vec<_>, _>>()?;
    let etas = cands
        .iter()
        .map(|a| eta_table(ctx, a))
        .collect::<Result<Vec<_>, _>>()?;
    let indep = cands
        .iter()
        .map(|c| is_linearly_independent(ctx, c))
        .collect::<Result<Vec<_>, _>>()?;
    let g_perm: Vec<bool> = gs.iter().map(|g| g.is_permutation()).collect();
    let f_idx: Vec<Vec<u32>> = fs.iter().map(|f| f.indices()).collect();
    let vs: Vec<usize> = (0..cands.len()).collect();
    let partial = exec.map(&vs, |&iv| {
        let mut out = AstSweepSummary::default();
        let mut buf = vec![0u32; ctx.order() as usize];
        for (fi, f) in f_idx.iter().enumerate() {
            // rho o f depends only on (v, f)
            let rf: Vec<u32> = f.iter().map(|&y| rhos[iv][y as usize]).collect();
            for (ia, et) in etas.iter().enumerate() {
                for (ig, g) in gs.iter().enumerate() {
                    for (slot, &r) in buf.iter_mut().zip(&rf) {
                        *slot = et[g.table[r as usize] as usize];
                    }
                    let oracle = is_permutation_indices(&buf);
                    let predicted = indep[iv] && indep[ia] && g_perm[ig];
                    out.checks += 1;
                    out.predicted_permutations += predicted as u64;
                    if oracle != predicted {
                        out.counterexamples.push(AstCounterexample {
                            f_index: fi,
                            v: cands[iv].clone(),
                            a: cands[ia].clone(),
                            g_index: ig,
                            predicted,
                            oracle,
                        });
                    }
                }
            }
        }
        out
    });
    let mut total = AstSweepSummary::default();
    for p in partial {
        total.checks += p.checks;
        total.predicted_permutations += p.predicted_permutations;
        total.counterexamples.extend(p.counterexamples);
    }
    Ok(total)
}

/// Seeded pool of vector maps alternating random permutations and random maps.
pub fn random_g_pool(
    base: &FieldCtx,
    n: usize,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<VectorMap> {
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                VectorMap::random_permutation(base, n, rng)
            } else {
                VectorMap::random_map(base, n, rng)
            }
        })
        .collect()
}

/// Uniformly random permutation of the field.
pub fn random_permutation_table(ctx: &FieldCtx, rng: &mut impl Rng) -> FnTable {
    let mut idx: Vec<u32> = (0..ctx.order()).collect();
    idx.shuffle(rng);
    FnTable::from_indices(ctx, &idx)
}

/// `xs -> rho(v, f(eta(a, xs)))`.
pub fn compose_corollary_vec(
    ctx: &FieldCtx,
    v: &[FieldElement],
    f: &FnTable,
    a: &[FieldElement],
) -> Result<VectorMap, FrameworkError> {
    let n = ctx.degree() as usize;
    check_dim(n, v.len())?;
    check_dim(n, a.len())?;
    if f.ctx() != ctx {
        return Err(FieldError::CtxMismatch.into());
    }
    let rt = rho_table(ctx, v)?;
    let et = eta_table(ctx, a)?;
    let table = et
        .iter()
        .map(|&x| rt[f.values()[x as usize].index() as usize])
        .collect();
    VectorMap::new(base_of(ctx)?, n, table)
}

/// `Tr(v f(x)) = sum_j (v f)^(q^j)`, expanded symbolically and reduced.
pub fn trace_poly(v: FieldElement, f: &SparsePoly) -> Result<SparsePoly, FrameworkError> {
    let ctx = f.ctx();
    let q = ctx.base_order() as u64;
    let vf = f.scale(v)?;
    let mut acc = SparsePoly::zero(ctx);
    let mut qj = 1u64;
    for _ in 0..ctx.degree() {
        acc = acc.add(&vf.frobenius_twist(qj).reduce())?;
        qj *= q;
    }
    Ok(acc)
}

/// Symbolic `F = sum_i a_i h_i(Tr(v_i f(x)))`, reduced. Shift components are
/// not used here.
pub fn build_ast2(
    f: &SparsePoly,
    comps: &ComponentPerms,
    v: &Basis,
    a: &Basis,
) -> Result<SparsePoly, FrameworkError> {
    let ctx = f.ctx();
    let n = ctx.degree() as usize;
    check_dim(n, comps.h.len())?;
    check_dim(n, v.len())?;
    check_dim(n, a.len())?;
    let base = base_of(ctx)?;
    let f = f.reduce();
    let mut acc = SparsePoly::zero(ctx);
    for i in 0..n {
        if comps.h[i].ctx() != base {
            return Err(FieldError::CtxMismatch.into());
        }
        let t = trace_poly(v.elems()[i], &f)?;
        let hi = t.compose_outer(&comps.h[i])?;
        acc = acc.add(&hi.scale(a.elems()[i])?)?;
    }
    Ok(acc)
}

/// Pointwise evaluation of the same composition as [`build_ast2`].
pub fn ast2_pointwise(
    f: &SparsePoly,
    comps: &ComponentPerms,
    v: &Basis,
    a: &Basis,
) -> Result<FnTable, FrameworkError> {
    let ctx = f.ctx();
    let n = ctx.degree() as usize;
    check_dim(n, comps.h.len())?;
    let ft = f.to_table();
    let hts: Vec<FnTable> = comps.h.iter().map(|h| h.to_table()).collect();
    let mut out = Vec::with_capacity(ctx.order() as usize);
    for x in ctx.elements() {
        let y = ft.get(x);
        let mut acc = ctx.zero();
        for i in 0..n {
            let tr = ctx.trace(ctx.mul(v.elems()[i], y))?;
            let hv = ctx.embed(hts[i].get(tr))?;
            acc = ctx.add(acc, ctx.mul(a.elems()[i], hv));
        }
        out.push(acc);
    }
    Ok(FnTable::new(ctx, out)?)
}

/// `(x_1..x_n) -> (h_i(x_i) + g_i(x_1..x_{i-1}))_i`; always a permutation.
pub fn build_triangular_g(
    base: &FieldCtx,
    comps: &ComponentPerms,
) -> Result<VectorMap, FrameworkError> {
    let n = comps.h.len();
    let q = base.order() as usize;
    let tables: Vec<FnTable> = comps.h.iter().map(|h| h.to_table()).collect();
    for (i, (h, t)) in comps.h.iter().zip(&tables).enumerate() {
        if h.ctx() != base {
            return Err(FieldError::CtxMismatch.into());
        }
        if !t.is_permutation() {
            return Err(FrameworkError::ComponentNotPermutation(i));
        }
    }
    for (i, s) in comps.shifts.iter().enumerate() {
        if let Some(s) = s {
            if s.len() != q.pow(i as u32) {
                return Err(FrameworkError::BadTable);
            }
        }
    }
    Ok(VectorMap::from_fn(base, n, |xs| {
        (0..n)
            .map(|i| {
                let hv = tables[i].get(xs[i]);
                match comps.shifts.get(i).and_then(|s| s.as_ref()) {
                    Some(s) => base.add(hv, s[tuple_index(base, &xs[..i])]),
                    None => hv,
                }
            })
            .collect()
    }))
}

/// `F = sum a_i Tr(v_i f(x))^(m_i)` and the predicate `gcd(prod m_i, q-1) = 1`.
pub fn monomial_family(
    f: &SparsePoly,
    exps: &[u64],
    v: &Basis,
    a: &Basis,
) -> Result<(SparsePoly, bool), FrameworkError> {
    if !f.to_table().is_permutation() {
        return Err(FrameworkError::NotPermutation);
    }
    let ctx = f.ctx();
    let base = base_of(ctx)?;
    let q = base.order() as u64;
    let h = exps
        .iter()
        .map(|&m| SparsePoly::monomial(base, m, base.one()))
        .collect();
    let poly = build_ast2(f, &ComponentPerms::new(h), v, a)?;
    // gcd(prod, q-1) computed on the residue to avoid overflow
    let prod = exps
        .iter()
        .fold(1 % (q - 1), |acc, &m| acc * (m % (q - 1)) % (q - 1));
    let pred = gcd(prod, q - 1) == 1;
    Ok((poly, pred))
}

/// `psi(g) = rho^{-1} o g o rho` as a table on `F_{q^n}`.
pub fn psi(v: &Basis, g: &VectorMap) -> Result<FnTable, FrameworkError> {
    let ctx = v.ctx();
    check_dim(v.len(), g.n)?;
    let rt = rho_table(ctx, v.elems())?;
    let inv = eta_table(ctx, v.dual_elems())?;
    let out: Vec<u32> = rt
        .iter()
        .map(|&r| inv[g.table[r as usize] as usize])
        .collect();
    Ok(FnTable::from_indices(ctx, &out))
}

/// `psi^{-1}(F) = rho o F o rho^{-1}`.
pub fn psi_inverse(v: &Basis, big_f: &FnTable) -> Result<VectorMap, FrameworkError> {
    let ctx = v.ctx();
    let rt = rho_table(ctx, v.elems())?;
    let inv = eta_table(ctx, v.dual_elems())?;
    let table = inv
        .iter()
        .map(|&x| rt[big_f.values()[x as usize].index() as usize])
        .collect();
    VectorMap::new(base_of(ctx)?, v.len(), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_CAP;
    use crate::poly::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> FieldCtx {
        FieldCtx::quadratic_over(q, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn identity_example() {
        let k = f(3);
        let base = k.base().unwrap().clone();
        let v = Basis::power(&k).unwrap();
        let u = v.dual();
        let id = FnTable::identity(&k);
        let g = VectorMap::identity(&base, 2);
        let out = compose_ast(&k, &id, v.elems(), &g, u.elems()).unwrap();
        assert_eq!(out, id);
        assert_eq!(
            check_ast_conditions(&k, v.elems(), u.elems(), &g).unwrap(),
            (true, true, true)
        );
        let frob = SparsePoly::monomial(&k, 3, k.one()).to_table();
        assert_eq!(
            compose_ast(&k, &frob, v.elems(), &g, u.elems()).unwrap(),
            frob
        );
        let corner = compose_corollary_vec(&k, v.elems(), &id, u.elems()).unwrap();
        assert_eq!(corner, VectorMap::identity(&base, 2));
    }

    #[test]
    fn failing_conditions() {
        let k = f(3);
        let base = k.base().unwrap().clone();
        let v = Basis::power(&k).unwrap();
        let g = VectorMap::identity(&base, 2);
        let ones = [k.one(), k.one()];
        let id = FnTable::identity(&k);
        assert!(!compose_ast(&k, &id, v.elems(), &g, &ones)
            .unwrap()
            .is_permutation());
        assert!(!check_ast_conditions(&k, &ones, v.elems(), &g).unwrap().0);
        let c = VectorMap::constant(&base, 2, &[base.zero(), base.one()]);
        assert!(
            !check_ast_conditions(&k, v.elems(), v.elems(), &c)
                .unwrap()
                .2
        );
        assert!(ast_equivalence_check(&k, &id, &ones, v.elems(), &g).unwrap());
        let sq = SparsePoly::monomial(&k, 2, k.one()).to_table();
        assert_eq!(
            ast_equivalence_check(&k, &sq, v.elems(), v.elems(), &g).unwrap_err(),
            FrameworkError::NotPermutation
        );
    }

    #[test]
    fn property_sweep_f4() {
        let k = f(2);
        let base = k.base().unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gs = random_g_pool(&base, 2, 20, &mut rng);
        let fs = vec![
            FnTable::identity(&k),
            random_permutation_table(&k, &mut rng),
        ];
        let s = ast_property_sweep(&k, &fs, &gs, Exec::Sequential).unwrap();
        assert_eq!(s.checks, 2 * 16 * 16 * 20);
        assert!(s.counterexamples.is_empty());
        assert!(s.predicted_permutations > 0);
    }

    #[test]
    fn ast2_symbolic_matches_pointwise() {
        let k = f(5);
        let base = k.base().unwrap().clone();
        let v = Basis::power(&k).unwrap();
        let a = v.dual();
        let fx = SparsePoly::x(&k);
        let id = ComponentPerms::new(vec![SparsePoly::x(&base), SparsePoly::x(&base)]);
        assert_eq!(build_ast2(&fx, &id, &v, &a).unwrap(), fx);
        let cubes = ComponentPerms::new(vec![
            SparsePoly::monomial(&base, 3, base.one()),
            SparsePoly::monomial(&base, 3, base.one()),
        ]);
        let sym = build_ast2(&fx, &cubes, &v, &a).unwrap();
        assert_eq!(sym.to_table(), ast2_pointwise(&fx, &cubes, &v, &a).unwrap());
        assert!(sym.to_table().is_permutation());
    }

    #[test]
    fn triangular_maps() {
        let base = FieldCtx::prime(3).unwrap();
        let x = SparsePoly::x(&base);
        let plain =
            build_triangular_g(&base, &ComponentPerms::new(vec![x.clone(), x.clone()])).unwrap();
        assert_eq!(plain, VectorMap::identity(&base, 2));
        let shift: Vec<_> = base.elements().map(|t| base.mul(t, t)).collect();
        let comps =
            ComponentPerms::with_shifts(vec![x.clone(), x.clone()], vec![None, Some(shift)]);
        assert!(build_triangular_g(&base, &comps).unwrap().is_permutation());
        let sq = parse_poly(&base, "x^2").unwrap();
        assert_eq!(
            build_triangular_g(&base, &ComponentPerms::new(vec![sq, x])).unwrap_err(),
            FrameworkError::ComponentNotPermutation(0)
        );
    }

    #[test]
    fn monomial_predicates() {
        for (q, exps, want) in [
            (5u64, [1u64, 1], true),
            (5, [3, 3], true),
            (7, [3, 1], false),
        ] {
            let k = f(q);
            let v = Basis::power(&k).unwrap();
            let a = v.dual();
            let (poly, pred) = monomial_family(&SparsePoly::x(&k), &exps, &v, &a).unwrap();
            assert_eq!(pred, want);
            assert_eq!(poly.to_table().is_permutation(), want);
        }
    }

    #[test]
    fn psi_round_trip() {
        let k = f(2);
        let base = k.base().unwrap().clone();
        let v = Basis::power(&k).unwrap();
        assert_eq!(
            psi(&v, &VectorMap::identity(&base, 2)).unwrap(),
            FnTable::identity(&k)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g1 = VectorMap::random_map(&base, 2, &mut rng);
        let g2 = VectorMap::random_map(&base, 2, &mut rng);
        let lhs = psi(&v, &g1.compose(&g2).unwrap()).unwrap();
        let rhs = psi(&v, &g1)
            .unwrap()
            .compose(&psi(&v, &g2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(psi_inverse(&v, &psi(&v, &g1).unwrap()).unwrap(), g1);
    }
}
