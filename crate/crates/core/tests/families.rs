use std::collections::HashSet;

use ppf_core::exec::Exec;
use ppf_core::families::{
    check_family, epsilon_domain, sweep_table1, Epsilon, FamilyParams, OmegaChoice, Q2Field, Sign,
    SweepConfig,
};
use ppf_core::field::{FieldElement, DEFAULT_CAP};

fn k(q: u64) -> Q2Field {
    Q2Field::new(q, DEFAULT_CAP).unwrap()
}

fn is_bijective(k: &Q2Field, f: impl Fn(FieldElement) -> FieldElement) -> bool {
    let image: HashSet<u32> = k.f.elements().map(|x| f(x).index()).collect();
    image.len() as u64 == k.q * k.q
}

#[test]
fn linear_family2_instance_is_not_a_permutation() {
    // q = 7, w = 4, eps = 2w = 1: L(x) = 2x + 5x^7 vanishes on F_7
    let k7 = k(7);
    let f = &k7.f;
    let w = k7.omega(OmegaChoice::Omega).unwrap();
    assert_eq!(w, f.from_int(4));
    let p = FamilyParams {
        family: 2,
        q: 7,
        m: 1,
        n: 1,
        alpha_idx: None,
        beta_idx: None,
        omega_choice: Some(OmegaChoice::Omega),
        sign: Sign::Plus,
        epsilon: Epsilon::Base(1),
    };
    let r = check_family(&k7, &p).unwrap();
    let direct = is_bijective(&k7, |x| {
        f.add(f.mul(f.from_int(2), x), f.mul(f.from_int(5), f.pow(x, 7)))
    });
    assert!(!direct);
    assert_eq!(r.oracle, direct);
    assert!(r.predicted);
    assert!(!r.agree);
}

#[test]
fn lappano_thirteen_direct() {
    let k13 = k(13);
    let f = &k13.f;
    let direct = is_bijective(&k13, |x| f.add(f.pow(x, 3), f.pow(x, 27)));
    assert!(!direct);
    assert_eq!(
        ppf_core::families::lappano_check(&k13, k13.fq.one()).unwrap(),
        (true, false)
    );
}

#[test]
fn pentanomial_q4_direct() {
    // e = 1 + 2 + 2 = 5 is prime to 3, yet (X + wX^4)^5 - w(wX + X^4)^5 is not injective on F_16
    let k4 = k(4);
    let f = &k4.f;
    let w = k4.omega(OmegaChoice::Omega).unwrap();
    let direct = is_bijective(&k4, |x| {
        let x4 = f.pow(x, 4);
        let a = f.pow(f.add(x, f.mul(w, x4)), 5);
        let b = f.pow(f.add(f.mul(w, x), x4), 5);
        f.sub(a, f.mul(w, b))
    });
    assert!(!direct);
    let o = ppf_core::families::pentanomial_identity_check(
        &k4,
        [1, 2, 2],
        ppf_core::families::PentVariant::Z1,
        OmegaChoice::Omega,
    )
    .unwrap();
    assert!(o.predicted);
    assert_eq!(o.oracle, direct);
}

#[test]
fn epsilon_domains() {
    let k9 = k(9);
    assert_eq!(epsilon_domain(&k9, 1, 5).len(), 80);
    let k11 = k(11);
    let a = epsilon_domain(&k11, 5, 5);
    assert_eq!(a, epsilon_domain(&k11, 5, 5));
    assert_eq!(a.len(), 14);
    assert_ne!(epsilon_domain(&k11, 1, 5), epsilon_domain(&k11, 1, 6));
    let k8 = k(8);
    assert_eq!(epsilon_domain(&k8, 7, 0).len(), 7 + 4);
}

#[test]
fn family_one_sweep_q3_and_q9() {
    let out = sweep_table1(&SweepConfig {
        q_list: vec![3, 9],
        m_max: 4,
        n_max: 4,
        families: None,
        seed: 0,
        cap: DEFAULT_CAP,
        keep_all: false,
        exec: Exec::Parallel,
    });
    assert_eq!(out.summary.disagreements, 0);
    assert_eq!(out.summary.expansion_mismatches, 0);
    assert_eq!(out.summary.by_family.len(), 2);
    // q = 3: 4*3 ordered pairs, 16 (m, n), 8 epsilons
    assert_eq!(out.summary.by_family[0].instances, 12 * 16 * 8);
}

#[test]
fn sweep_is_mode_independent() {
    let cfg = |exec| SweepConfig {
        q_list: vec![5],
        m_max: 3,
        n_max: 3,
        families: None,
        seed: 9,
        cap: DEFAULT_CAP,
        keep_all: true,
        exec,
    };
    let a = sweep_table1(&cfg(Exec::Sequential));
    let b = sweep_table1(&cfg(Exec::Parallel));
    assert_eq!(a.reports, b.reports);
    assert_eq!(a.summary, b.summary);
}
