//! The eight families of binomial-power polynomials over `F_{q^2}`, their
//! predicted permutation conditions, and the related trinomial, binomial,
//! pentanomial and trace identities.
//!
//! Every family has the shape `L_1(x)^m + eps * L_2(x)^n` where each `L_i` is
//! `c x + d x^q`. The oracle for all checks is the exhaustive permutation test
//! on the reduced polynomial's table.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::field::{factor_prime_power, gcd, FieldCtx, FieldElement, FieldError};
use crate::linear::is_linearly_independent;
use crate::poly::{FnTable, PolyError, SparsePoly};

/// Largest exponent accepted by the binomial expansion (exact in `u128`).
pub const BINOMIAL_CAP: u64 = 100;

/// Largest `m`, `n` accepted for a family instance.
pub const FAMILY_EXPONENT_CAP: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unknown family {0}")]
    BadFamily(u8),
    #[error("family {family} is not defined for q = {q} (q mod 3 = {})", q % 3)]
    BadModulusClass { family: u8, q: u64 },
    #[error("epsilon is outside the domain of family {0}")]
    EpsilonDomain(u8),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("invalid example: {0}")]
    BadKind(String),
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("lemma part {part} needs a different residue of q mod 3 (q = {q})")]
    BadCongruence { part: u8, q: u64 },
}

/// `F_q` and `F_{q^2}` with the distinguished subgroups used by the families.
#[derive(Clone, Debug)]
pub struct Q2Field {
    pub q: u64,
    pub fq: FieldCtx,
    pub f: FieldCtx,
    /// `mu_{q+1}` in canonical generator order.
    pub mu: Vec<FieldElement>,
    /// `[w, w^2]` for the canonical order-3 element `w`; empty when `3 | q`.
    pub omegas: Vec<FieldElement>,
}

impl Q2Field {
    pub fn new(q: u64, cap: u64) -> Result<Self, FamilyError> {
        let f = FieldCtx::quadratic_over(q, cap)?;
        let fq = f.base().expect("quadratic extension").clone();
        let mu = f.subgroup_mu(q + 1)?;
        let omegas = match f.find_order3() {
            Ok(w) => vec![w, f.mul(w, w)],
            Err(_) => Vec::new(),
        };
        Ok(Q2Field {
            q,
            fq,
            f,
            mu,
            omegas,
        })
    }

    pub fn p(&self) -> u64 {
        self.f.p() as u64
    }

    /// Nonzero elements of `F_q`, as elements of `F_{q^2}`.
    pub fn base_star(&self) -> Vec<FieldElement> {
        (1..self.q as u32).map(|i| self.f.element(i)).collect()
    }

    pub fn omega(&self, choice: OmegaChoice) -> Result<FieldElement, FamilyError> {
        let i = match choice {
            OmegaChoice::Omega => 0,
            OmegaChoice::OmegaSq => 1,
        };
        self.omegas
            .get(i)
            .copied()
            .ok_or(FamilyError::Field(FieldError::CharThree))
    }

    pub fn frobenius_table(&self) -> Vec<FieldElement> {
        self.f.elements().map(|x| self.f.pow(x, self.q)).collect()
    }

    pub fn text(&self, x: FieldElement) -> String {
        self.f.format_element(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaChoice {
    Omega,
    OmegaSq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// The scalar in front of the second power. `Base` and `Field` carry an
/// element index of `F_{q^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    Base(u32),
    Field(u32),
    PlusOmega,
    MinusOmega,
    PlusOmegaSq,
    MinusOmegaSq,
}

impl Epsilon {
    pub fn tag(self) -> &'static str {
        match self {
            Epsilon::Base(_) => "base",
            Epsilon::Field(_) => "field",
            Epsilon::PlusOmega => "+omega",
            Epsilon::MinusOmega => "-omega",
            Epsilon::PlusOmegaSq => "+omega2",
            Epsilon::MinusOmegaSq => "-omega2",
        }
    }

    pub fn value(
        self,
        k: &Q2Field,
        omega: Option<FieldElement>,
    ) -> Result<FieldElement, FamilyError> {
        let f = &k.f;
        let w = || omega.ok_or(FamilyError::Field(FieldError::CharThree));
        Ok(match self {
            Epsilon::Base(i) | Epsilon::Field(i) => f
                .try_element(i as u64)
                .ok_or(FamilyError::BadParams(format!("epsilon index {i}")))?,
            Epsilon::PlusOmega => w()?,
            Epsilon::MinusOmega => f.neg(w()?),
            Epsilon::PlusOmegaSq => f.mul(w()?, w()?),
            Epsilon::MinusOmegaSq => f.neg(f.mul(w()?, w()?)),
        })
    }
}

/// One instance of a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: u8,
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub alpha_idx: Option<usize>,
    pub beta_idx: Option<usize>,
    pub omega_choice: Option<OmegaChoice>,
    pub sign: Sign,
    pub epsilon: Epsilon,
}

/// The sign each family carries; only family 2 lets the caller choose.
pub fn intrinsic_sign(family: u8) -> Sign {
    match family {
        4 | 6 | 8 => Sign::Minus,
        _ => Sign::Plus,
    }
}

/// Families defined for this `q`.
pub fn applicable_families(q: u64) -> Vec<u8> {
    match q % 3 {
        1 => vec![1, 2, 3, 4],
        2 => vec![1, 5, 6, 7, 8],
        _ => vec![1],
    }
}

pub fn family_applies(family: u8, q: u64) -> bool {
    applicable_families(q).contains(&family)
}

/// Binomial coefficient reduced mod `p`, computed exactly for `e <= BINOMIAL_CAP`.
pub fn binomial_mod(e: u64, i: u64, p: u64) -> Result<u64, FamilyError> {
    if e > BINOMIAL_CAP {
        return Err(FamilyError::BadParams(format!(
            "exponent {e} above binomial cap {BINOMIAL_CAP}"
        )));
    }
    if i > e {
        return Ok(0);
    }
    let i = i.min(e - i);
    let mut c: u128 = 1;
    for j in 0..i {
        c = c * (e - j) as u128 / (j + 1) as u128;
    }
    Ok((c % p as u128) as u64)
}

/// `(c x + d x^q)^e` expanded with the binomial theorem; exponents not reduced.
pub fn expand_linear_power(
    k: &Q2Field,
    c: FieldElement,
    d: FieldElement,
    e: u64,
) -> Result<SparsePoly, FamilyError> {
    let f = &k.f;
    let mut terms = Vec::with_capacity(e as usize + 1);
    for i in 0..=e {
        let b = binomial_mod(e, i, k.p())?;
        if b == 0 {
            continue;
        }
        let coef = f.mul(f.from_int(b as i64), f.mul(f.pow(c, i), f.pow(d, e - i)));
        terms.push((i + k.q * (e - i), coef));
    }
    Ok(SparsePoly::from_terms(f, terms))
}

pub fn validate(k: &Q2Field, p: &FamilyParams) -> Result<(), FamilyError> {
    if !(1..=8).contains(&p.family) {
        return Err(FamilyError::BadFamily(p.family));
    }
    if p.q != k.q {
        return Err(FamilyError::BadParams(format!(
            "q = {} but field has q = {}",
            p.q, k.q
        )));
    }
    if !family_applies(p.family, p.q) {
        return Err(FamilyError::BadModulusClass {
            family: p.family,
            q: p.q,
        });
    }
    for e in [p.m, p.n] {
        if e == 0 || e > FAMILY_EXPONENT_CAP {
            return Err(FamilyError::BadParams(format!(
                "exponent {e} outside 1..={FAMILY_EXPONENT_CAP}"
            )));
        }
    }
    if p.family != 2 && p.sign != intrinsic_sign(p.family) {
        return Err(FamilyError::BadParams(format!(
            "family {} has a fixed sign",
            p.family
        )));
    }
    let nonzero_index = |i: u32, limit: u64| i != 0 && (i as u64) < limit;
    if p.family == 1 {
        let (Some(a), Some(b)) = (p.alpha_idx, p.beta_idx) else {
            return Err(FamilyError::BadParams(
                "family 1 needs alpha and beta".into(),
            ));
        };
        if a >= k.mu.len() || b >= k.mu.len() {
            return Err(FamilyError::BadParams(
                "alpha/beta index outside mu_(q+1)".into(),
            ));
        }
        if a == b {
            return Err(FamilyError::BadParams(
                "alpha and beta must be distinct".into(),
            ));
        }
        match p.epsilon {
            Epsilon::Base(i) if nonzero_index(i, k.q) => Ok(()),
            Epsilon::Field(i) if nonzero_index(i, k.q * k.q) => Ok(()),
            _ => Err(FamilyError::EpsilonDomain(1)),
        }
    } else {
        if p.omega_choice.is_none() {
            return Err(FamilyError::BadParams("omega choice required".into()));
        }
        match p.epsilon {
            Epsilon::Base(i) if nonzero_index(i, k.q) => Ok(()),
            Epsilon::Base(_) | Epsilon::Field(_) => Err(FamilyError::EpsilonDomain(p.family)),
            _ if p.family >= 5 => Ok(()),
            _ => Err(FamilyError::EpsilonDomain(p.family)),
        }
    }
}

/// Coefficient pairs `(c, d)` of the two linear forms `c x + d x^q`.
pub fn linear_forms(
    k: &Q2Field,
    p: &FamilyParams,
) -> Result<[(FieldElement, FieldElement); 2], FamilyError> {
    let f = &k.f;
    let one = f.one();
    if p.family == 1 {
        let a = k.mu[p.alpha_idx.unwrap()];
        let b = k.mu[p.beta_idx.unwrap()];
        return Ok([(one, a), (one, b)]);
    }
    let w = k.omega(p.omega_choice.unwrap())?;
    let minus_one = f.neg(one);
    Ok(match p.family {
        2 => {
            let sw = if p.sign == Sign::Plus { w } else { f.neg(w) };
            [(one, one), (one, sw)]
        }
        3 | 7 => [(one, w), (w, one)],
        4 | 8 => [(one, w), (w, minus_one)],
        5 => [(one, one), (one, w)],
        6 => [(one, one), (one, f.neg(w))],
        other => return Err(FamilyError::BadFamily(other)),
    })
}

fn epsilon_of(k: &Q2Field, p: &FamilyParams) -> Result<FieldElement, FamilyError> {
    let w = match p.omega_choice {
        Some(c) => Some(k.omega(c)?),
        None => None,
    };
    p.epsilon.value(k, w)
}

/// The reduced polynomial `L_1^m + eps L_2^n`.
pub fn construct_family(k: &Q2Field, p: &FamilyParams) -> Result<SparsePoly, FamilyError> {
    validate(k, p)?;
    let [(c1, d1), (c2, d2)] = linear_forms(k, p)?;
    let eps = epsilon_of(k, p)?;
    let first = expand_linear_power(k, c1, d1, p.m)?;
    let second = expand_linear_power(k, c2, d2, p.n)?.scale(eps)?;
    Ok(first.add(&second)?.reduce())
}

/// Direct pointwise table of `L_1(x)^m + eps L_2(x)^n`.
pub fn family_pointwise(
    k: &Q2Field,
    p: &FamilyParams,
    frob: &[FieldElement],
) -> Result<FnTable, FamilyError> {
    validate(k, p)?;
    let f = &k.f;
    let [(c1, d1), (c2, d2)] = linear_forms(k, p)?;
    let eps = epsilon_of(k, p)?;
    let vals = f
        .elements()
        .map(|x| {
            let xq = frob[x.index() as usize];
            let l1 = f.add(f.mul(c1, x), f.mul(d1, xq));
            let l2 = f.add(f.mul(c2, x), f.mul(d2, xq));
            f.add(f.pow(l1, p.m), f.mul(eps, f.pow(l2, p.n)))
        })
        .collect();
    Ok(FnTable::new(f, vals)?)
}

fn not_div3(x: i64) -> bool {
    x.rem_euclid(3) != 0
}

/// The predicted necessary and sufficient condition.
///
/// In even characteristic the minus-sign families 4, 6, 8 are the same
/// polynomials as 3, 5, 7 and take their conditions.
pub fn ns_condition(k: &Q2Field, p: &FamilyParams) -> Result<bool, FamilyError> {
    validate(k, p)?;
    let q = p.q;
    let f = &k.f;
    let g = gcd(p.m * p.n, q - 1) == 1;
    let even = q.is_multiple_of(2);
    let (m, n) = (p.m as i64, p.n as i64);
    let case_shift = |eps: Epsilon| match eps {
        Epsilon::PlusOmega | Epsilon::MinusOmega => 1,
        Epsilon::PlusOmegaSq | Epsilon::MinusOmegaSq => 2,
        _ => 0,
    };
    let family = match p.family {
        4 | 6 | 8 if even => p.family - 1,
        other => other,
    };
    Ok(match family {
        1 => {
            let eps = epsilon_of(k, p)?;
            let a = k.mu[p.alpha_idx.unwrap()];
            let b = k.mu[p.beta_idx.unwrap()];
            let lhs = f.mul(f.pow(eps, q - 1), f.pow(a, p.m));
            g && lhs != f.pow(b, p.n)
        }
        2 | 4 | 6 | 8 => g,
        3 => g && not_div3(m - 2 * n),
        5 => g && (n.rem_euclid(3) != case_shift(p.epsilon)),
        7 => g && not_div3(case_shift(p.epsilon) + m - n),
        other => return Err(FamilyError::BadFamily(other)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub tag: String,
    pub value: String,
}

/// One row of a sweep: predicted condition against the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub family: u8,
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub alpha: String,
    pub beta: String,
    pub omega: String,
    pub sign: String,
    pub epsilon: EpsilonReport,
    pub predicted: bool,
    pub oracle: bool,
    pub agree: bool,
    pub witness: Option<[String; 2]>,
}

/// A report together with the expansion self-check.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub report: AgreementReport,
    /// Whether the binomial expansion and the pointwise evaluation agree.
    pub expansion_ok: bool,
}

pub fn check_family(k: &Q2Field, p: &FamilyParams) -> Result<AgreementReport, FamilyError> {
    Ok(check_family_full(k, p, &k.frobenius_table())?.report)
}

pub fn check_family_full(
    k: &Q2Field,
    p: &FamilyParams,
    frob: &[FieldElement],
) -> Result<FamilyCheck, FamilyError> {
    let predicted = ns_condition(k, p)?;
    let poly = construct_family(k, p)?;
    let table = poly.to_table();
    let direct = family_pointwise(k, p, frob)?;
    let collision = table.collision();
    let oracle = collision.is_none();
    let w = p.omega_choice.map(|c| k.omega(c)).transpose()?;
    let eps = p.epsilon.value(k, w)?;
    let report = AgreementReport {
        family: p.family,
        q: p.q,
        m: p.m,
        n: p.n,
        alpha: p.alpha_idx.map(|i| k.text(k.mu[i])).unwrap_or_default(),
        beta: p.beta_idx.map(|i| k.text(k.mu[i])).unwrap_or_default(),
        omega: w.map(|w| k.text(w)).unwrap_or_default(),
        sign: p.sign.symbol().into(),
        epsilon: EpsilonReport {
            tag: p.epsilon.tag().into(),
            value: k.text(eps),
        },
        predicted,
        oracle,
        agree: predicted == oracle,
        witness: collision.map(|(a, b)| [k.text(a), k.text(b)]),
    };
    Ok(FamilyCheck {
        report,
        expansion_ok: table == direct,
    })
}

/// Recovers the instance described by a report row.
pub fn params_from_report(k: &Q2Field, r: &AgreementReport) -> Result<FamilyParams, FamilyError> {
    let f = &k.f;
    let find_mu = |s: &str| -> Result<Option<usize>, FamilyError> {
        if s.is_empty() {
            return Ok(None);
        }
        let x = f.parse_element(s)?;
        k.mu.iter()
            .position(|&m| m == x)
            .map(Some)
            .ok_or_else(|| FamilyError::BadParams(format!("{s} is not in mu_(q+1)")))
    };
    let omega_choice = if r.omega.is_empty() {
        None
    } else {
        let w = f.parse_element(&r.omega)?;
        match k.omegas.iter().position(|&o| o == w) {
            Some(0) => Some(OmegaChoice::Omega),
            Some(_) => Some(OmegaChoice::OmegaSq),
            None => {
                return Err(FamilyError::BadParams(format!(
                    "{} has no order 3",
                    r.omega
                )))
            }
        }
    };
    let sign = match r.sign.as_str() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        s => return Err(FamilyError::BadParams(format!("bad sign {s}"))),
    };
    let idx = || -> Result<u32, FamilyError> { Ok(f.parse_element(&r.epsilon.value)?.index()) };
    let epsilon = match r.epsilon.tag.as_str() {
        "base" => Epsilon::Base(idx()?),
        "field" => Epsilon::Field(idx()?),
        "+omega" => Epsilon::PlusOmega,
        "-omega" => Epsilon::MinusOmega,
        "+omega2" => Epsilon::PlusOmegaSq,
        "-omega2" => Epsilon::MinusOmegaSq,
        t => return Err(FamilyError::BadParams(format!("bad epsilon tag {t}"))),
    };
    Ok(FamilyParams {
        family: r.family,
        q: r.q,
        m: r.m,
        n: r.n,
        alpha_idx: find_mu(&r.alpha)?,
        beta_idx: find_mu(&r.beta)?,
        omega_choice,
        sign,
        epsilon,
    })
}

fn sample_sorted(len: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if len <= count {
        return (0..len).collect();
    }
    let mut v = sample(rng, len, count).into_vec();
    v.sort_unstable();
    v
}

fn derived_seed(seed: u64, q: u64, family: u8) -> u64 {
    seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((family as u64) << 56)
}

/// The epsilon values swept for a family: exhaustive for `q <= 9`, otherwise
/// a seeded sample of 10, plus the four order-3 tags for families 5 to 8.
pub fn epsilon_domain(k: &Q2Field, family: u8, seed: u64) -> Vec<Epsilon> {
    let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(seed, k.q, family));
    let exhaustive = k.q <= 9;
    let mut out: Vec<Epsilon> = if family == 1 {
        let total = (k.q * k.q - 1) as usize;
        let picks = if exhaustive {
            (0..total).collect()
        } else {
            sample_sorted(total, 10, &mut rng)
        };
        picks
            .into_iter()
            .map(|i| Epsilon::Field(i as u32 + 1))
            .collect()
    } else {
        let total = (k.q - 1) as usize;
        let picks = if exhaustive {
            (0..total).collect()
        } else {
            sample_sorted(total, 10, &mut rng)
        };
        picks
            .into_iter()
            .map(|i| Epsilon::Base(i as u32 + 1))
            .collect()
    };
    if family >= 5 {
        out.extend([
            Epsilon::PlusOmega,
            Epsilon::MinusOmega,
            Epsilon::PlusOmegaSq,
            Epsilon::MinusOmegaSq,
        ]);
    }
    out
}

/// All instances of one family at one `q`, in grid order
/// (omega, sign, alpha, beta, m, n, epsilon).
pub fn family_grid(
    k: &Q2Field,
    family: u8,
    m_max: u64,
    n_max: u64,
    seed: u64,
) -> Vec<FamilyParams> {
    let eps = epsilon_domain(k, family, seed);
    let mut out = Vec::new();
    let omegas: Vec<Option<OmegaChoice>> = if family == 1 {
        vec![None]
    } else {
        vec![Some(OmegaChoice::Omega), Some(OmegaChoice::OmegaSq)]
    };
    let signs = if family == 2 {
        vec![Sign::Plus, Sign::Minus]
    } else {
        vec![intrinsic_sign(family)]
    };
    let pairs: Vec<(Option<usize>, Option<usize>)> = if family == 1 {
        let l = k.mu.len();
        (0..l)
            .flat_map(|a| {
                (0..l)
                    .filter(move |&b| b != a)
                    .map(move |b| (Some(a), Some(b)))
            })
            .collect()
    } else {
        vec![(None, None)]
    };
    for &omega_choice in &omegas {
        for &sign in &signs {
            for &(alpha_idx, beta_idx) in &pairs {
                for m in 1..=m_max {
                    for n in 1..=n_max {
                        for &epsilon in &eps {
                            out.push(FamilyParams {
                                family,
                                q: k.q,
                                m,
                                n,
                                alpha_idx,
                                beta_idx,
                                omega_choice,
                                sign,
                                epsilon,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub q_list: Vec<u64>,
    pub m_max: u64,
    pub n_max: u64,
    /// Restrict to these families; `None` means every applicable family.
    pub families: Option<Vec<u8>>,
    pub seed: u64,
    pub cap: u64,
    /// Keep every report rather than only disagreements.
    pub keep_all: bool,
    pub exec: Exec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepError {
    pub q: u64,
    pub family: Option<u8>,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: u64,
    pub disagreements: u64,
    pub expansion_mismatches: u64,
    pub errors: u64,
    /// Disagreements split by `(q, family)`.
    pub by_family: Vec<FamilyTally>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTally {
    pub q: u64,
    pub family: u8,
    pub instances: u64,
    pub disagreements: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Table1Outcome {
    pub reports: Vec<AgreementReport>,
    pub errors: Vec<SweepError>,
    pub summary: SweepSummary,
}

pub fn sweep_table1(cfg: &SweepConfig) -> Table1Outcome {
    let mut out = Table1Outcome::default();
    for &q in &cfg.q_list {
        let k = match factor_prime_power(q)
            .ok_or(FamilyError::Field(FieldError::NotPrimePower(q)))
            .and_then(|_| Q2Field::new(q, cfg.cap))
        {
            Ok(k) => k,
            Err(e) => {
                out.errors.push(SweepError {
                    q,
                    family: None,
                    error: e.to_string(),
                });
                continue;
            }
        };
        let frob = k.frobenius_table();
        let fams = cfg
            .families
            .clone()
            .unwrap_or_else(|| applicable_families(q));
        for fam in fams {
            if !(1..=8).contains(&fam) {
                let error = FamilyError::BadFamily(fam).to_string();
                out.errors.push(SweepError {
                    q,
                    family: Some(fam),
                    error,
                });
                continue;
            }
            if !family_applies(fam, q) {
                let error = FamilyError::BadModulusClass { family: fam, q }.to_string();
                out.errors.push(SweepError {
                    q,
                    family: Some(fam),
                    error,
                });
                continue;
            }
            let grid = family_grid(&k, fam, cfg.m_max, cfg.n_max, cfg.seed);
            let results = cfg.exec.map(&grid, |p| check_family_full(&k, p, &frob));
            let mut tally = FamilyTally {
                q,
                family: fam,
                ..Default::default()
            };
            for r in results {
                match r {
                    Ok(c) => {
                        tally.instances += 1;
                        if !c.expansion_ok {
                            out.summary.expansion_mismatches += 1;
                        }
                        if !c.report.agree {
                            tally.disagreements += 1;
                        }
                        if cfg.keep_all || !c.report.agree {
                            out.reports.push(c.report);
                        }
                    }
                    Err(e) => out.errors.push(SweepError {
                        q,
                        family: Some(fam),
                        error: e.to_string(),
                    }),
                }
            }
            out.summary.instances += tally.instances;
            out.summary.disagreements += tally.disagreements;
            out.summary.by_family.push(tally);
        }
    }
    out.summary.errors = out.errors.len() as u64;
    out
}

/// The closed-form trinomials and quadrinomials obtained with `beta = -alpha`,
/// `eps = 1`, `m = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    Tri3,
    Tri5,
    Quad7,
    /// Exponents `Q`, `R`, `S`, each a power of the characteristic.
    Pqrs(u64, u64, u64),
}

impl ExampleKind {
    pub fn degree(self) -> u64 {
        match self {
            ExampleKind::Tri3 => 3,
            ExampleKind::Tri5 => 5,
            ExampleKind::Quad7 => 7,
            ExampleKind::Pqrs(a, b, c) => a + b + c,
        }
    }
}

pub fn is_power_of(x: u64, p: u64) -> bool {
    let mut x = x;
    if x == 0 {
        return false;
    }
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// The example polynomial written out term by term with `alpha = mu[alpha_idx]`.
pub fn example_polys(
    k: &Q2Field,
    kind: ExampleKind,
    alpha_idx: usize,
) -> Result<SparsePoly, FamilyError> {
    let f = &k.f;
    let q = k.q;
    let alpha = *k
        .mu
        .get(alpha_idx)
        .ok_or_else(|| FamilyError::BadKind(format!("alpha index {alpha_idx}")))?;
    let c = |n: i64, e: u64| f.mul(f.from_int(n), f.pow(alpha, e));
    let terms = match kind {
        ExampleKind::Tri3 => vec![(3, f.one()), (1 + 2 * q, c(3, 2))],
        ExampleKind::Tri5 => vec![(5, f.one()), (3 + 2 * q, c(10, 2)), (1 + 4 * q, c(5, 4))],
        ExampleKind::Quad7 => vec![
            (7, f.one()),
            (5 + 2 * q, c(21, 2)),
            (3 + 4 * q, c(35, 4)),
            (1 + 6 * q, c(7, 6)),
        ],
        ExampleKind::Pqrs(bq, r, s) => {
            let p = k.p();
            if ![bq, r, s].iter().all(|&x| is_power_of(x, p)) {
                return Err(FamilyError::BadKind(format!(
                    "({bq},{r},{s}) are not all powers of {p}"
                )));
            }
            vec![
                (bq + r + s, f.one()),
                (bq + q * (r + s), c(1, r + s)),
                (r + q * (bq + s), c(1, bq + s)),
                (s + q * (bq + r), c(1, bq + r)),
            ]
        }
    };
    Ok(SparsePoly::from_terms(f, terms).reduce())
}

/// `gcd(deg, q - 1) = 1`.
pub fn example_predicate(k: &Q2Field, kind: ExampleKind) -> bool {
    gcd(kind.degree(), k.q - 1) == 1
}

/// Predicted and oracle verdicts for `a x^3 + x^(1+2q)` with `a` in `F_q*`.
pub fn lappano_check(k: &Q2Field, a: FieldElement) -> Result<(bool, bool), FamilyError> {
    let f = &k.f;
    let q = k.q;
    if q.is_multiple_of(2) {
        return Err(FamilyError::BadParams("q must be odd".into()));
    }
    k.fq.check(a)?;
    if a.is_zero() {
        return Err(FamilyError::ZeroCoefficient);
    }
    let fq = &k.fq;
    let third = if k.p() == 3 {
        None
    } else {
        Some(fq.inv(fq.from_int(3))?)
    };
    let predicted = (a == fq.one() && q % 4 == 1)
        || (third == Some(a) && q % 6 == 5)
        || (third.map(|t| fq.neg(t)) == Some(a) && q % 12 == 11);
    let poly = SparsePoly::from_terms(f, vec![(3, f.embed(a)?), (1 + 2 * q, f.one())]).reduce();
    Ok((predicted, poly.to_table().is_permutation()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityStatus {
    /// The identity held for this many admissible coefficient choices.
    Holds(u64),
    /// No coefficient satisfies the constraint, so there is nothing to check.
    NoWitness,
    /// Failing coefficient and point, as element text.
    Fails { a: String, x: String },
}

impl IdentityStatus {
    pub fn counterexample_free(&self) -> bool {
        !matches!(self, IdentityStatus::Fails { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma31Outcome {
    pub part: u8,
    pub q: u64,
    pub status: IdentityStatus,
}

/// The admissible `a` for `a^(q-1) = lambda`: the canonical solution times `F_q*`.
pub fn admissible(k: &Q2Field, lambda: FieldElement) -> Vec<FieldElement> {
    match k.f.solve_power_q_minus_1(lambda) {
        Ok(a0) => k.base_star().iter().map(|&c| k.f.mul(a0, c)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Checks one part of the trace identities `Tr(a s x) = a (c x + d x^q)`
/// for every admissible `a`.
pub fn lemma31_check(k: &Q2Field, part: u8) -> Result<Lemma31Outcome, FamilyError> {
    let f = &k.f;
    let q = k.q;
    let r = q % 3;
    let ok_class = match part {
        1 => true,
        2 | 3 => r != 0,
        4 | 6 => r == 1,
        5 | 7 => r == 2,
        _ => return Err(FamilyError::BadParams(format!("no part {part}"))),
    };
    if !ok_class {
        return Err(FamilyError::BadCongruence { part, q });
    }
    let one = f.one();
    // (lambda, s, c, d): a^(q-1) = lambda, Tr(a s x) = a(c x + d x^q)
    let mut cases: Vec<(FieldElement, FieldElement, FieldElement, FieldElement)> = Vec::new();
    if part == 1 {
        for lam in f.nonzero_elements() {
            cases.push((lam, one, one, lam));
        }
    } else {
        for &w in &k.omegas {
            let w2 = f.mul(w, w);
            cases.push(match part {
                2 => (w, one, one, w),
                3 => (f.neg(w), one, one, f.neg(w)),
                4 => (w2, w, w, one),
                5 => (w, w, w, one),
                6 => (f.neg(w2), w, w, f.neg(one)),
                7 => (f.neg(w), w, w, f.neg(one)),
                _ => unreachable!(),
            });
        }
    }
    let mut witnesses = 0u64;
    for (lam, s, c, d) in cases {
        for a in admissible(k, lam) {
            debug_assert_eq!(f.pow(a, q - 1), lam);
            witnesses += 1;
            for x in f.elements() {
                let lhs = f.embed(f.trace(f.mul(f.mul(a, s), x))?)?;
                let rhs = f.mul(a, f.add(f.mul(c, x), f.mul(d, f.pow(x, q))));
                if lhs != rhs {
                    return Ok(Lemma31Outcome {
                        part,
                        q,
                        status: IdentityStatus::Fails {
                            a: k.text(a),
                            x: k.text(x),
                        },
                    });
                }
            }
        }
    }
    let status = if witnesses == 0 {
        IdentityStatus::NoWitness
    } else {
        IdentityStatus::Holds(witnesses)
    };
    Ok(Lemma31Outcome { part, q, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PentVariant {
    /// `(X + w X^q)^e - w (w X + X^q)^e`, `e = Q + R + S`.
    Z1,
    /// As `Z1` with `e = Q + qR + S`.
    Z1q,
    /// `(w X + X^q)^e - w (X + w X^q)^e`, `e = Q + R + S`.
    Z2,
    /// As `Z2` with `e = Q + qR + S`.
    Z2q,
    /// `(w X + alpha X^q)^e - w (X - alpha w X^q)^e` with `alpha = mu[i]`.
    Twisted(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentOutcome {
    pub q: u64,
    pub exps: [u64; 3],
    pub variant: PentVariant,
    pub omega: String,
    pub exponent: u64,
    pub identity: IdentityStatus,
    pub predicted: bool,
    pub oracle: bool,
}

impl PentOutcome {
    pub fn passed(&self) -> bool {
        self.identity.counterexample_free() && self.predicted == self.oracle
    }
}

// pre * a^{-e} * Tr(a * inner * X)^e, for all a with a^(q-1) = lambda
struct TraceTerm {
    lambda: FieldElement,
    inner: FieldElement,
    pre: FieldElement,
}

/// Checks a pentanomial against its trace form pointwise and its permutation
/// verdict against `gcd(e, q - 1) = 1`.
pub fn pentanomial_identity_check(
    k: &Q2Field,
    exps: [u64; 3],
    variant: PentVariant,
    omega: OmegaChoice,
) -> Result<PentOutcome, FamilyError> {
    let f = &k.f;
    let q = k.q;
    let p = k.p();
    if q.is_multiple_of(3) {
        return Err(FamilyError::BadParams("3 divides q".into()));
    }
    if !exps.iter().all(|&x| is_power_of(x, p)) {
        return Err(FamilyError::BadParams(format!(
            "{exps:?} are not powers of {p}"
        )));
    }
    let [bq, r, s] = exps;
    let e = match variant {
        PentVariant::Z1q | PentVariant::Z2q => bq + q * r + s,
        _ => bq + r + s,
    };
    let w = k.omega(omega)?;
    let w2 = f.mul(w, w);
    let one = f.one();
    let minus_w = f.neg(w);
    let (first, second, terms) = match variant {
        PentVariant::Z1 | PentVariant::Z1q => {
            let b_lambda = if q % 3 == 1 { w2 } else { w };
            (
                (one, w),
                (w, one),
                [
                    TraceTerm {
                        lambda: w,
                        inner: one,
                        pre: one,
                    },
                    TraceTerm {
                        lambda: b_lambda,
                        inner: w,
                        pre: minus_w,
                    },
                ],
            )
        }
        PentVariant::Z2 | PentVariant::Z2q => {
            let a_lambda = if q % 3 == 1 { w2 } else { w };
            (
                (w, one),
                (one, w),
                [
                    TraceTerm {
                        lambda: a_lambda,
                        inner: w,
                        pre: one,
                    },
                    TraceTerm {
                        lambda: w,
                        inner: one,
                        pre: minus_w,
                    },
                ],
            )
        }
        PentVariant::Twisted(i) => {
            if q % 3 != 2 {
                return Err(FamilyError::BadParams(
                    "twisted form needs q = 2 mod 3".into(),
                ));
            }
            let alpha = *k
                .mu
                .get(i)
                .ok_or_else(|| FamilyError::BadParams(format!("alpha index {i}")))?;
            (
                (w, alpha),
                (one, f.neg(f.mul(alpha, w))),
                [
                    TraceTerm {
                        lambda: f.mul(alpha, w2),
                        inner: one,
                        pre: f.pow(w, e),
                    },
                    TraceTerm {
                        lambda: f.neg(f.mul(alpha, w)),
                        inner: one,
                        pre: minus_w,
                    },
                ],
            )
        }
    };
    let poly = expand_linear_power(k, first.0, first.1, e)?
        .add(&expand_linear_power(k, second.0, second.1, e)?.scale(minus_w)?)?
        .reduce();
    let table = poly.to_table();

    let a_set = admissible(k, terms[0].lambda);
    let b_set = admissible(k, terms[1].lambda);
    let identity = if a_set.is_empty() || b_set.is_empty() {
        IdentityStatus::NoWitness
    } else {
        let term = |t: &TraceTerm,
                    a: FieldElement,
                    x: FieldElement|
         -> Result<FieldElement, FamilyError> {
            let tr = f.embed(f.trace(f.mul(f.mul(a, t.inner), x))?)?;
            let ae = f.inv(f.pow(a, e))?;
            Ok(f.mul(t.pre, f.mul(ae, f.pow(tr, e))))
        };
        let mut status = IdentityStatus::Holds((a_set.len() * b_set.len()) as u64);
        'outer: for &a in &a_set {
            for &b in &b_set {
                for x in f.elements() {
                    let rhs = f.add(term(&terms[0], a, x)?, term(&terms[1], b, x)?);
                    if rhs != table.get(x) {
                        status = IdentityStatus::Fails {
                            a: format!("{};{}", k.text(a), k.text(b)),
                            x: k.text(x),
                        };
                        break 'outer;
                    }
                }
            }
        }
        status
    };
    Ok(PentOutcome {
        q,
        exps,
        variant,
        omega: k.text(w),
        exponent: e,
        identity,
        predicted: gcd(e, q - 1) == 1,
        oracle: table.is_permutation(),
    })
}

/// Predicted against oracle for a single polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub predicted: bool,
    pub oracle: bool,
    pub agree: bool,
    pub witness: Option<[String; 2]>,
}

impl Verdict {
    pub fn new(k: &Q2Field, predicted: bool, table: &FnTable) -> Self {
        let collision = table.collision();
        let oracle = collision.is_none();
        Verdict {
            predicted,
            oracle,
            agree: predicted == oracle,
            witness: collision.map(|(a, b)| [k.text(a), k.text(b)]),
        }
    }
}

/// `f(x) = b1 g1(Tr(a1 x)) + b2 g2(Tr(a2 x))` with `g1, g2` over `F_q`.
#[allow(clippy::too_many_arguments)]
pub fn corollary31_check(
    k: &Q2Field,
    a1: FieldElement,
    a2: FieldElement,
    b1: FieldElement,
    b2: FieldElement,
    g1: &SparsePoly,
    g2: &SparsePoly,
) -> Result<Verdict, FamilyError> {
    let f = &k.f;
    for x in [a1, a2, b1, b2] {
        f.check(x)?;
    }
    if g1.ctx() != &k.fq || g2.ctx() != &k.fq {
        return Err(FieldError::CtxMismatch.into());
    }
    let t1 = g1.to_table();
    let t2 = g2.to_table();
    let predicted = is_linearly_independent(f, &[a1, a2]).map_err(linear_err)?
        && is_linearly_independent(f, &[b1, b2]).map_err(linear_err)?
        && t1.is_permutation()
        && t2.is_permutation();
    let vals = f
        .elements()
        .map(|x| {
            let y1 = f.embed(t1.get(f.trace(f.mul(a1, x))?))?;
            let y2 = f.embed(t2.get(f.trace(f.mul(a2, x))?))?;
            Ok(f.add(f.mul(b1, y1), f.mul(b2, y2)))
        })
        .collect::<Result<Vec<_>, FieldError>>()?;
    Ok(Verdict::new(k, predicted, &FnTable::new(f, vals)?))
}

fn linear_err(e: crate::linear::LinearError) -> FamilyError {
    match e {
        crate::linear::LinearError::Field(f) => FamilyError::Field(f),
        other => FamilyError::BadParams(other.to_string()),
    }
}
