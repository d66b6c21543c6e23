use proptest::prelude::*;

use ppf_core::families::{
    check_family, construct_family, params_from_report, Epsilon, FamilyParams, OmegaChoice,
    Q2Field, Sign,
};
use ppf_core::field::{FieldCtx, FieldElement, DEFAULT_CAP};
use ppf_core::linear::{
    dual_of, eta, eta_inverse, is_linearly_independent, rho, rho_inverse, Basis,
};
use ppf_core::poly::{parse_poly, FnTable, SparsePoly};

const ORDERS: [u64; 9] = [2, 3, 4, 5, 8, 9, 16, 25, 49];

fn field(q: u64) -> FieldCtx {
    FieldCtx::prime_power(q, DEFAULT_CAP).unwrap()
}

fn el(ctx: &FieldCtx, i: u64) -> FieldElement {
    ctx.element((i % ctx.order() as u64) as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(qi in 0usize..ORDERS.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(ORDERS[qi]);
        let (x, y, z) = (el(&f, a), el(&f, b), el(&f, c));
        prop_assert_eq!(f.mul(x, y), f.mul_reference(x, y));
        prop_assert_eq!(f.add(x, y), f.add_reference(x, y));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            prop_assert_eq!(f.pow(x, f.order() as u64 - 1), f.one());
        }
    }

    #[test]
    fn frobenius_and_trace(qi in 0usize..3, a in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::quadratic_over([3, 4, 5][qi], DEFAULT_CAP).unwrap();
        let base = f.base().unwrap().clone();
        let (x, y) = (el(&f, a), el(&f, b));
        let fr = |v| f.frobenius(v, 1).unwrap();
        prop_assert_eq!(fr(f.add(x, y)), f.add(fr(x), fr(y)));
        prop_assert_eq!(fr(f.mul(x, y)), f.mul(fr(x), fr(y)));
        prop_assert_eq!(f.frobenius(x, 2).unwrap(), x);
        let t = |v| f.trace(v).unwrap();
        prop_assert_eq!(t(f.add(x, y)), base.add(t(x), t(y)));
        let c = el(&base, a);
        prop_assert_eq!(t(f.mul(f.embed(c).unwrap(), x)), base.mul(c, t(x)));
    }

    #[test]
    fn dual_basis_is_dual(a in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::quadratic_over(5, DEFAULT_CAP).unwrap();
        let v = vec![el(&f, a), el(&f, b)];
        prop_assume!(is_linearly_independent(&f, &v).unwrap());
        let u = dual_of(&f, &v).unwrap();
        for (i, &vi) in v.iter().enumerate() {
            for (j, &uj) in u.iter().enumerate() {
                let t = f.trace(f.mul(vi, uj)).unwrap();
                prop_assert_eq!(t.index(), (i == j) as u32);
            }
        }
        let basis = Basis::new(&f, v.clone()).unwrap();
        for x in f.elements() {
            prop_assert_eq!(rho_inverse(&basis, &rho(&f, &v, x).unwrap()).unwrap(), x);
            prop_assert_eq!(eta(&f, &v, &eta_inverse(&basis, x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn reduction_preserves_values(
        qi in 0usize..ORDERS.len(),
        terms in prop::collection::vec((0u64..2000, any::<u64>()), 0..8),
    ) {
        let f = field(ORDERS[qi]);
        let p = SparsePoly::from_terms(&f, terms.iter().map(|&(e, c)| (e, el(&f, c))).collect());
        let r = p.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        for x in f.elements() {
            prop_assert_eq!(p.eval(x).unwrap(), r.eval(x).unwrap());
        }
        prop_assert_eq!(r.to_table().interpolate(), r.clone());
        prop_assert_eq!(parse_poly(&f, &r.format()).unwrap(), r);
    }

    #[test]
    fn permutation_inverse_round_trip(qi in 0usize..ORDERS.len(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let f = field(ORDERS[qi]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t = ppf_core::framework::random_permutation_table(&f, &mut rng);
        let inv = t.inverse().unwrap();
        prop_assert_eq!(inv.compose(&t).unwrap(), FnTable::identity(&f));
        prop_assert_eq!(t.compose(&inv).unwrap(), FnTable::identity(&f));
    }

    #[test]
    fn family_exponent_shape(
        fam in 1u8..=8, qi in 0usize..4, m in 1u64..=12, n in 1u64..=12,
        extra in any::<u64>(), eps_i in 0usize..5,
    ) {
        let q = [4u64, 5, 7, 8][qi];
        prop_assume!(ppf_core::families::family_applies(fam, q));
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        let p = random_params(&k, fam, m, n, extra, eps_i);
        let poly = construct_family(&k, &p).unwrap();
        for &(e, _) in poly.terms() {
            prop_assert!(e % (q - 1) == m % (q - 1) || e % (q - 1) == n % (q - 1));
        }
        let r = check_family(&k, &p).unwrap();
        prop_assert_eq!(params_from_report(&k, &r).unwrap(), p);
        prop_assert_eq!(r.witness.is_none(), r.oracle);
    }

    #[test]
    fn even_characteristic_signs_collapse(
        qi in 0usize..2, m in 1u64..=10, n in 1u64..=10, extra in any::<u64>(), eps_i in 0usize..5,
    ) {
        let q = [4u64, 8][qi];
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        let pairs: &[(u8, u8)] = if q % 3 == 1 { &[(2, 2), (3, 4)] } else { &[(5, 6), (7, 8)] };
        for &(a, b) in pairs {
            let mut pa = random_params(&k, a, m, n, extra, eps_i);
            let mut pb = pa.clone();
            pb.family = b;
            if a == 2 {
                pa.sign = Sign::Plus;
                pb.sign = Sign::Minus;
            } else {
                pb.sign = Sign::Minus;
            }
            prop_assert_eq!(construct_family(&k, &pa).unwrap(), construct_family(&k, &pb).unwrap());
        }
    }
}

fn random_params(
    k: &Q2Field,
    family: u8,
    m: u64,
    n: u64,
    extra: u64,
    eps_i: usize,
) -> FamilyParams {
    let q = k.q;
    let l = k.mu.len();
    let a = (extra % l as u64) as usize;
    let b = (a + 1 + ((extra >> 8) % (l as u64 - 1)) as usize) % l;
    let base_eps = Epsilon::Base(1 + ((extra >> 16) % (q - 1)) as u32);
    let epsilon = if family == 1 {
        Epsilon::Field(1 + ((extra >> 16) % (q * q - 1)) as u32)
    } else if family >= 5 {
        [
            base_eps,
            Epsilon::PlusOmega,
            Epsilon::MinusOmega,
            Epsilon::PlusOmegaSq,
            Epsilon::MinusOmegaSq,
        ][eps_i]
    } else {
        base_eps
    };
    FamilyParams {
        family,
        q,
        m,
        n,
        alpha_idx: (family == 1).then_some(a),
        beta_idx: (family == 1).then_some(b),
        omega_choice: (family != 1).then_some(if extra >> 40 & 1 == 0 {
            OmegaChoice::Omega
        } else {
            OmegaChoice::OmegaSq
        }),
        sign: ppf_core::families::intrinsic_sign(family),
        epsilon,
    }
}
