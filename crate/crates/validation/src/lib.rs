//! The acceptance criteria as functions returning an [`Outcome`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppf_core::exec::Exec;
use ppf_core::families::{
    example_polys, example_predicate, lappano_check, lemma31_check, pentanomial_identity_check,
    sweep_table1, ExampleKind, IdentityStatus, OmegaChoice, PentVariant, Q2Field, SweepConfig,
};
use ppf_core::field::{FieldCtx, FieldElement, DEFAULT_CAP};
use ppf_core::framework::{
    ast_property_sweep, psi, psi_inverse, random_g_pool, random_permutation_table, VectorMap,
};
use ppf_core::linear::{
    eta, eta_inverse, is_linearly_independent, rho, rho_inverse, tuple_from_index, Basis,
};
use ppf_core::poly::{FnTable, SparsePoly};

const SEED: u64 = 20240521;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn exec() -> Exec {
    Exec::default()
}

pub fn criterion1() -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    let mut mismatches = 0;
    let mut errors = 0;
    let mut per = Vec::new();
    for (qs, fams) in [
        (vec![4, 7, 13], vec![1, 2, 3, 4]),
        (vec![2, 5, 8, 11], vec![1, 5, 6, 7, 8]),
    ] {
        let out = sweep_table1(&SweepConfig {
            q_list: qs,
            m_max: 8,
            n_max: 8,
            families: Some(fams),
            seed: SEED,
            cap: DEFAULT_CAP,
            keep_all: false,
            exec: exec(),
        });
        total += out.summary.instances;
        bad += out.summary.disagreements;
        mismatches += out.summary.expansion_mismatches;
        errors += out.summary.errors;
        for t in out.summary.by_family {
            if t.disagreements > 0 {
                per.push(format!(
                    "q={} fam={}: {}/{}",
                    t.q, t.family, t.disagreements, t.instances
                ));
            }
        }
    }
    let pass = bad == 0 && mismatches == 0 && errors == 0;
    let mut detail = format!("{total} instances, {bad} disagreements, {mismatches} expansion mismatches, {errors} errors");
    if !per.is_empty() {
        detail.push_str(&format!(" [{}]", per.join("; ")));
    }
    outcome(pass, detail)
}

pub fn criterion2() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut run = |q: u64, kind: ExampleKind, expect: Option<bool>| {
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        let predicted = example_predicate(&k, kind);
        if let Some(e) = expect {
            if e != predicted {
                failures.push(format!("{kind:?} q={q}: predicate {predicted}"));
            }
        }
        for ai in 0..k.mu.len() {
            let oracle = example_polys(&k, kind, ai)
                .unwrap()
                .to_table()
                .is_permutation();
            checked += 1;
            if oracle != predicted {
                failures.push(format!("{kind:?} q={q} alpha#{ai}"));
            }
        }
    };
    for q in [5, 11] {
        run(q, ExampleKind::Tri3, Some(true));
    }
    for q in [7, 13] {
        run(q, ExampleKind::Tri3, Some(false));
    }
    for q in [3, 5, 7] {
        run(q, ExampleKind::Tri5, None);
        run(q, ExampleKind::Quad7, None);
        for a in [1, q] {
            for b in [1, q] {
                for c in [1, q] {
                    run(q, ExampleKind::Pqrs(a, b, c), None);
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} (example, q, alpha) checks, {} failures {:?}",
            failures.len(),
            failures
        ),
    )
}

pub fn criterion3() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for q in [5, 7, 11, 13] {
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        for a in k.fq.nonzero_elements() {
            let (predicted, oracle) = lappano_check(&k, a).unwrap();
            checked += 1;
            if predicted != oracle {
                failures.push(format!(
                    "q={q} a={} predicted={predicted} oracle={oracle}",
                    k.fq.format_element(a)
                ));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} coefficients, {} mismatches {:?}",
            failures.len(),
            failures
        ),
    )
}

pub fn criterion4() -> Outcome {
    let mut checks = 0;
    let mut bad = 0;
    for q in [2u64, 3] {
        let ctx = FieldCtx::quadratic_over(q, DEFAULT_CAP).unwrap();
        let base = ctx.base().unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ q);
        let fx = FnTable::identity(&ctx);
        let fq = SparsePoly::monomial(&ctx, q, ctx.one()).to_table();
        let fr = random_permutation_table(&ctx, &mut rng);
        let gs = random_g_pool(&base, 2, 100, &mut rng);
        let s = ast_property_sweep(&ctx, &[fx, fq, fr], &gs, exec()).unwrap();
        checks += s.checks;
        bad += s.counterexamples.len();
    }
    outcome(
        bad == 0,
        format!("{checks} (f, v, a, g) checks, {bad} counterexamples"),
    )
}

fn all_bases(ctx: &FieldCtx) -> Vec<Basis> {
    let els: Vec<FieldElement> = ctx.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            if is_linearly_independent(ctx, &[a, b]).unwrap() {
                out.push(Basis::new(ctx, vec![a, b]).unwrap());
            }
        }
    }
    out
}

fn inverse_contracts(b: &Basis) -> bool {
    let ctx = b.ctx();
    let base = ctx.base().unwrap();
    let tuples = (0..ctx.order() as usize).map(|i| tuple_from_index(base, b.len(), i));
    let field_ok = ctx.elements().all(|x| {
        let r = rho(ctx, b.elems(), x).unwrap();
        let back = rho_inverse(b, &r).unwrap();
        let e = eta_inverse(b, x).unwrap();
        back == x && eta(ctx, b.elems(), &e).unwrap() == x
    });
    let tuple_ok = tuples.into_iter().all(|t| {
        let x = rho_inverse(b, &t).unwrap();
        rho(ctx, b.elems(), x).unwrap() == t
            && eta_inverse(b, eta(ctx, b.elems(), &t).unwrap()).unwrap() == t
    });
    field_ok && tuple_ok
}

pub fn criterion5() -> Outcome {
    let f9 = FieldCtx::quadratic_over(3, DEFAULT_CAP).unwrap();
    let b9 = all_bases(&f9);
    let ok9 = b9.iter().filter(|b| inverse_contracts(b)).count();
    let f25 = FieldCtx::quadratic_over(5, DEFAULT_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut b25 = Vec::new();
    while b25.len() < 50 {
        let a = f25.element(rng.gen_range(0..25));
        let b = f25.element(rng.gen_range(0..25));
        if is_linearly_independent(&f25, &[a, b]).unwrap() {
            b25.push(Basis::new(&f25, vec![a, b]).unwrap());
        }
    }
    let ok25 = b25.iter().filter(|b| inverse_contracts(b)).count();
    outcome(
        b9.len() == 48 && ok9 == 48 && ok25 == 50,
        format!(
            "F_9: {ok9}/{} bases, F_25: {ok25}/50 sampled bases",
            b9.len()
        ),
    )
}

pub fn criterion6() -> Outcome {
    let ctx = FieldCtx::quadratic_over(2, DEFAULT_CAP).unwrap();
    let base = ctx.base().unwrap().clone();
    let bases = all_bases(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for _ in 0..500 {
        let v = &bases[rng.gen_range(0..bases.len())];
        let g1 = VectorMap::random_map(&base, 2, &mut rng);
        let g2 = VectorMap::random_map(&base, 2, &mut rng);
        let p1 = psi(v, &g1).unwrap();
        let p2 = psi(v, &g2).unwrap();
        let comp = psi(v, &g1.compose(&g2).unwrap()).unwrap() == p1.compose(&p2).unwrap();
        let sum = psi(v, &g1.add(&g2).unwrap()).unwrap() == p1.add(&p2).unwrap();
        let scal = base.elements().all(|c| {
            psi(v, &g1.scale(c).unwrap()).unwrap() == p1.scale(ctx.embed(c).unwrap()).unwrap()
        });
        let inv = psi_inverse(v, &p1).unwrap() == g1 && psi_inverse(v, &p2).unwrap() == g2;
        if !(comp && sum && scal && inv) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("500 map pairs, {bad} failures"))
}

pub fn criterion7() -> Outcome {
    let mut failures = Vec::new();
    let mut holds = 0;
    let mut vacuous = 0;
    for q in [4u64, 5, 7, 8, 11, 13] {
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        for part in 1..=7u8 {
            // parts not stated for this residue of q return an error
            if let Ok(o) = lemma31_check(&k, part) {
                match o.status {
                    IdentityStatus::Holds(_) => holds += 1,
                    IdentityStatus::NoWitness => vacuous += 1,
                    IdentityStatus::Fails { a, x } => {
                        failures.push(format!("q={q} part {part} a={a} x={x}"))
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{holds} (q, part) identities hold, {vacuous} without admissible coefficient, failures {failures:?}"),
    )
}

pub fn criterion8() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for q in [4u64, 5, 7, 8] {
        let k = Q2Field::new(q, DEFAULT_CAP).unwrap();
        let p = k.p();
        let powers: Vec<u64> = std::iter::successors(Some(1u64), |x| Some(x * p))
            .take_while(|&x| x <= q)
            .collect();
        let mut variants = vec![
            PentVariant::Z1,
            PentVariant::Z1q,
            PentVariant::Z2,
            PentVariant::Z2q,
        ];
        if q % 3 == 2 {
            variants.extend((0..k.mu.len()).map(PentVariant::Twisted));
        }
        for &a in &powers {
            for &b in &powers {
                for &c in &powers {
                    for &v in &variants {
                        for w in [OmegaChoice::Omega, OmegaChoice::OmegaSq] {
                            let o = pentanomial_identity_check(&k, [a, b, c], v, w).unwrap();
                            checked += 1;
                            if !o.passed() {
                                failures.push(format!(
                                    "q={q} ({a},{b},{c}) {v:?} e={} identity={:?} predicted={} oracle={}",
                                    o.exponent, o.identity, o.predicted, o.oracle
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let shown: Vec<&String> = failures.iter().take(6).collect();
    outcome(
        failures.is_empty(),
        format!("{checked} checks, {} failures {shown:?}", failures.len()),
    )
}

pub fn criterion9() -> Outcome {
    let f4 = FieldCtx::prime_power(4, DEFAULT_CAP).unwrap();
    let mut perms = 0;
    let mut census_ok = true;
    for code in 0..256u32 {
        let idx: Vec<u32> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
        let t = FnTable::from_indices(&f4, &idx);
        let p = t.interpolate();
        census_ok &= p.is_reduced() && p.to_table() == t;
        perms += t.is_permutation() as u32;
    }

    let f16 = FieldCtx::prime_power(16, DEFAULT_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut reduce_ok = 0;
    for _ in 0..200 {
        let terms = (0..rng.gen_range(1..8))
            .map(|_| (rng.gen_range(0..400u64), f16.element(rng.gen_range(0..16))))
            .collect();
        let p = SparsePoly::from_terms(&f16, terms);
        let r = p.reduce();
        let sound = r.is_reduced()
            && f16
                .elements()
                .all(|x| p.eval(x).unwrap() == r.eval(x).unwrap());
        reduce_ok += sound as u32;
    }

    let f25 = FieldCtx::prime_power(25, DEFAULT_CAP).unwrap();
    let mut inv_ok = 0;
    for _ in 0..50 {
        let t = random_permutation_table(&f25, &mut rng);
        let p = t.interpolate();
        let pinv = t.inverse().unwrap().interpolate();
        let id = FnTable::identity(&f25);
        let round = pinv.to_table().compose(&p.to_table()).unwrap() == id
            && p.to_table().compose(&pinv.to_table()).unwrap() == id;
        inv_ok += round as u32;
    }
    outcome(
        perms == 24 && census_ok && reduce_ok == 200 && inv_ok == 50,
        format!("F_4 census {perms}/256 permutations (round trip {census_ok}), reduction {reduce_ok}/200, inverse {inv_ok}/50"),
    )
}


pub type Criterion = (u8, &'static str, fn() -> Outcome);

/// Every criterion in order, with a short name.
pub fn criteria() -> [Criterion; 9] {
    [
        (1, "family table sweep", criterion1),
        (2, "example trinomials and quadrinomials", criterion2),
        (3, "Lappano coefficients", criterion3),
        (4, "AST equivalence property", criterion4),
        (5, "rho/eta inverse contracts", criterion5),
        (6, "psi isomorphism", criterion6),
        (7, "trace identities, all parts", criterion7),
        (8, "pentanomial identities", criterion8),
        (9, "engine self-consistency", criterion9),
    ]
}
