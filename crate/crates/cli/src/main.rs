//! `ppf`: command-line checks for permutation polynomials over finite fields.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ppf_core::exec::Exec;
use ppf_core::families::{
    check_family, construct_family, intrinsic_sign, lappano_check, lemma31_check,
    params_from_report, pentanomial_identity_check, sweep_table1, AgreementReport, Epsilon,
    FamilyParams, IdentityStatus, OmegaChoice, PentVariant, Q2Field, Sign, SweepConfig,
};
use ppf_core::field::{FieldCtx, FieldElement, FieldSpec, DEFAULT_CAP};
use ppf_core::framework::{
    check_ast_conditions, compose_ast, psi, psi_inverse, random_permutation_table, VectorMap,
};
use ppf_core::linear::{is_linearly_independent, Basis};
use ppf_core::poly::parse_poly;

#[derive(Parser, Debug)]
#[command(
    name = "ppf",
    version,
    about = "Permutation polynomial checks over finite fields"
)]
struct Cli {
    /// Field description, e.g. `p=5,n=2` or `p=2,k=2,n=2` or `p=3,n=2,mod=[2,2,1]`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest field order that may be built.
    #[arg(long, global = true, env = "PPF_CAP", default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test whether a polynomial permutes the field given by --field.
    Verify {
        /// Polynomial text, e.g. `x^3 + 3*(a2)*x^11`.
        poly: String,
        /// Also print the compositional inverse as a polynomial.
        #[arg(long)]
        inverse: bool,
    },
    /// Sweep the eight families against the brute-force oracle.
    Table1(Table1Args),
    /// Random trials of the AST equivalence over --field.
    AstCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Random trials of the psi conjugation properties over --field.
    PsiCheck {
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Dual basis of the given elements of --field.
    DualBasis {
        /// Elements in element text form, e.g. `1 (0,1)` or `a1`.
        #[arg(num_args = 1..)]
        elems: Vec<String>,
    },
    /// Check a single family instance.
    Family(FamilyArgs),
    /// Check the trace identities for F_{q^2}.
    Lemma31 {
        #[arg(long)]
        q: u64,
        /// Only this part (1..=7).
        #[arg(long)]
        part: Option<u8>,
    },
    /// Check the pentanomial identities and permutation verdicts.
    Pentanomial(PentArgs),
    /// Check `a x^3 + x^(1+2q)` for every (or one) `a` in F_q*.
    Lappano {
        #[arg(long)]
        q: u64,
        /// Index of `a` in F_q.
        #[arg(long)]
        a: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct Table1Args {
    /// Comma separated list of q.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    q: Vec<u64>,
    #[arg(long, default_value_t = 8)]
    m_max: u64,
    #[arg(long, default_value_t = 8)]
    n_max: u64,
    /// Restrict to these families.
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<u8>>,
    /// Only keep disagreeing instances in the report.
    #[arg(long)]
    disagreements_only: bool,
    /// Run on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Re-run the instance described by a JSON report record.
    #[arg(long, conflicts_with_all = ["family", "q"])]
    record: Option<PathBuf>,
    #[arg(long, required_unless_present = "record")]
    q: Option<u64>,
    #[arg(long, required_unless_present = "record")]
    family: Option<u8>,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value_t = 1)]
    n: u64,
    /// Index of alpha in mu_(q+1) (family 1).
    #[arg(long)]
    alpha: Option<usize>,
    /// Index of beta in mu_(q+1) (family 1).
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, value_enum, default_value_t = OmegaArg::Omega)]
    omega: OmegaArg,
    /// Sign for family 2; the other families fix their own sign.
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    /// `base:<i>`, `field:<i>` (element index or element text), `+omega`,
    /// `-omega`, `+omega2` or `-omega2`.
    #[arg(long, default_value = "base:1", allow_hyphen_values = true)]
    epsilon: String,
}

#[derive(Args, Debug)]
struct PentArgs {
    #[arg(long)]
    q: u64,
    /// `Q,R,S`; every triple of powers of p up to q when absent.
    #[arg(long, value_delimiter = ',')]
    exps: Option<Vec<u64>>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Index of alpha in mu_(q+1) for the twisted form; all when absent.
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long, value_enum)]
    omega: Option<OmegaArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OmegaArg {
    Omega,
    Omega2,
}

impl From<OmegaArg> for OmegaChoice {
    fn from(o: OmegaArg) -> Self {
        match o {
            OmegaArg::Omega => OmegaChoice::Omega,
            OmegaArg::Omega2 => OmegaChoice::OmegaSq,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Z1,
    Z1q,
    Z2,
    Z2q,
    Twisted,
}

struct Report {
    json: Value,
    text: String,
    code: u8,
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Report, UsageError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&report.json).expect("serializable report");
                    s.push('\n');
                    s
                }
                Format::Text => report.text,
            };
            let written = match &cli.out {
                Some(path) => {
                    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(report.code)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Verify { poly, inverse } => cmd_verify(cli, poly, *inverse),
        Command::Table1(a) => cmd_table1(cli, a),
        Command::AstCheck { trials } => cmd_ast_check(cli, *trials),
        Command::PsiCheck { trials } => cmd_psi_check(cli, *trials),
        Command::DualBasis { elems } => cmd_dual_basis(cli, elems),
        Command::Family(a) => cmd_family(cli, a),
        Command::Lemma31 { q, part } => cmd_lemma31(cli, *q, *part),
        Command::Pentanomial(a) => cmd_pentanomial(cli, a),
        Command::Lappano { q, a } => cmd_lappano(cli, *q, *a),
    }
}

fn field_of(cli: &Cli) -> Result<(String, FieldCtx), UsageError> {
    let spec = cli
        .field
        .clone()
        .ok_or_else(|| UsageError("--field is required for this command".into()))?;
    let ctx = FieldSpec::parse(&spec)?.build(cli.cap)?;
    Ok((spec, ctx))
}

fn q2(cli: &Cli, q: u64) -> Result<Q2Field, UsageError> {
    Ok(Q2Field::new(q, cli.cap)?)
}

fn texts(ctx: &FieldCtx, xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(|&x| ctx.format_element(x)).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_verify(cli: &Cli, text: &str, want_inverse: bool) -> CmdResult {
    let (spec, ctx) = field_of(cli)?;
    let p = parse_poly(&ctx, text)?.reduce();
    let table = p.to_table();
    let collision = table.collision();
    let is_perm = collision.is_none();
    let inverse = if is_perm && want_inverse {
        Some(table.inverse()?.interpolate().format())
    } else {
        None
    };
    let witness = collision.map(|(a, b)| [ctx.format_element(a), ctx.format_element(b)]);
    let mut t = format!(
        "field {spec} (order {})\npolynomial {}\npermutation: {}\n",
        ctx.order(),
        p.format(),
        yes(is_perm)
    );
    if let Some([a, b]) = &witness {
        let _ = writeln!(t, "collision: f({a}) = f({b})");
    }
    if let Some(inv) = &inverse {
        let _ = writeln!(t, "inverse: {inv}");
    }
    Ok(Report {
        json: json!({
            "command": "verify",
            "field": spec,
            "seed": cli.seed,
            "poly": p.format(),
            "is_permutation": is_perm,
            "inverse_table_available": is_perm,
            "witness": witness,
            "inverse": inverse,
        }),
        text: t,
        code: if is_perm { 0 } else { 3 },
    })
}

fn cmd_table1(cli: &Cli, a: &Table1Args) -> CmdResult {
    if a.q.is_empty() {
        return Err(UsageError("table1 needs a non-empty --q list".into()));
    }
    let cfg = SweepConfig {
        q_list: a.q.clone(),
        m_max: a.m_max,
        n_max: a.n_max,
        families: a.families.clone(),
        seed: cli.seed,
        cap: cli.cap,
        keep_all: !a.disagreements_only,
        exec: if a.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
    };
    let out = sweep_table1(&cfg);
    let s = &out.summary;
    let mut t = format!(
        "table1 q={:?} m<={} n<={} seed={}\ninstances {} disagreements {} expansion mismatches {} errors {}\n",
        a.q, a.m_max, a.n_max, cli.seed, s.instances, s.disagreements, s.expansion_mismatches, s.errors
    );
    for f in &s.by_family {
        let _ = writeln!(
            t,
            "  q={:<3} family {}: {} instances, {} disagreements",
            f.q, f.family, f.instances, f.disagreements
        );
    }
    for r in out.reports.iter().filter(|r| !r.agree) {
        let _ = writeln!(t, "  disagree: {}", report_line(r));
    }
    for e in &out.errors {
        let _ = writeln!(t, "  error: q={} family={:?}: {}", e.q, e.family, e.error);
    }
    let code = if s.disagreements > 0 || s.expansion_mismatches > 0 {
        2
    } else if !out.errors.is_empty() {
        1
    } else {
        0
    };
    Ok(Report {
        json: json!({
            "command": "table1",
            "seed": cli.seed,
            "q": a.q,
            "m_max": a.m_max,
            "n_max": a.n_max,
            "families": a.families,
            "summary": s,
            "reports": out.reports,
            "errors": out.errors,
        }),
        text: t,
        code,
    })
}

fn report_line(r: &AgreementReport) -> String {
    format!(
        "family {} q={} m={} n={} alpha={} beta={} omega={} sign={} eps={}:{} predicted={} oracle={}",
        r.family, r.q, r.m, r.n, r.alpha, r.beta, r.omega, r.sign, r.epsilon.tag, r.epsilon.value, r.predicted, r.oracle
    )
}

fn random_set(
    ctx: &FieldCtx,
    n: usize,
    want_basis: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> = (0..n)
            .map(|_| ctx.element(rng.gen_range(0..ctx.order())))
            .collect();
        if !want_basis || is_linearly_independent(ctx, &v).unwrap_or(false) {
            return v;
        }
    }
}

fn extension_parts(ctx: &FieldCtx) -> Result<(FieldCtx, usize), UsageError> {
    let base = ctx
        .base()
        .ok_or_else(|| UsageError("the field must be an extension (give n >= 2)".into()))?
        .clone();
    Ok((base, ctx.degree() as usize))
}

fn cmd_ast_check(cli: &Cli, trials: usize) -> CmdResult {
    if trials == 0 {
        return Err(UsageError("--trials must be positive".into()));
    }
    let (spec, ctx) = field_of(cli)?;
    let (base, n) = extension_parts(&ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut failures = Vec::new();
    let mut predicted_perms = 0;
    for trial in 0..trials {
        let f = random_permutation_table(&ctx, &mut rng);
        let v = random_set(&ctx, n, rng.gen_bool(0.75), &mut rng);
        let a = random_set(&ctx, n, rng.gen_bool(0.75), &mut rng);
        let g = if rng.gen_bool(0.5) {
            VectorMap::random_permutation(&base, n, &mut rng)
        } else {
            VectorMap::random_map(&base, n, &mut rng)
        };
        let (cv, ca, cg) = check_ast_conditions(&ctx, &v, &a, &g)?;
        let predicted = cv && ca && cg;
        let oracle = compose_ast(&ctx, &f, &v, &g, &a)?.is_permutation();
        predicted_perms += predicted as usize;
        if predicted != oracle {
            failures.push(json!({
                "trial": trial,
                "v": texts(&ctx, &v),
                "a": texts(&ctx, &a),
                "predicted": predicted,
                "oracle": oracle,
            }));
        }
    }
    let passed = trials - failures.len();
    let text = format!(
        "ast-check field {spec} seed {}: {passed}/{trials} trials agree ({predicted_perms} predicted permutations)\n",
        cli.seed
    );
    Ok(Report {
        json: json!({
            "command": "ast-check",
            "field": spec,
            "seed": cli.seed,
            "trials": trials,
            "passed": passed,
            "predicted_permutations": predicted_perms,
            "failures": failures,
        }),
        text,
        code: if failures.is_empty() { 0 } else { 2 },
    })
}

fn cmd_psi_check(cli: &Cli, trials: usize) -> CmdResult {
    if trials == 0 {
        return Err(UsageError("--trials must be positive".into()));
    }
    let (spec, ctx) = field_of(cli)?;
    let (base, n) = extension_parts(&ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let v = Basis::new(&ctx, random_set(&ctx, n, true, &mut rng))?;
        let g1 = VectorMap::random_map(&base, n, &mut rng);
        let g2 = VectorMap::random_map(&base, n, &mut rng);
        let c = base.element(rng.gen_range(0..base.order()));
        let p1 = psi(&v, &g1)?;
        let p2 = psi(&v, &g2)?;
        let composition = psi(&v, &g1.compose(&g2)?)? == p1.compose(&p2)?;
        let additive = psi(&v, &g1.add(&g2)?)? == p1.add(&p2)?;
        let scalar = psi(&v, &g1.scale(c)?)? == p1.scale(ctx.embed(c)?)?;
        let inverse = psi_inverse(&v, &p1)? == g1;
        if !(composition && additive && scalar && inverse) {
            failures.push(json!({
                "trial": trial,
                "basis": texts(&ctx, v.elems()),
                "composition": composition,
                "additive": additive,
                "scalar": scalar,
                "inverse": inverse,
            }));
        }
    }
    let passed = trials - failures.len();
    Ok(Report {
        json: json!({
            "command": "psi-check",
            "field": spec,
            "seed": cli.seed,
            "trials": trials,
            "passed": passed,
            "failures": failures,
        }),
        text: format!(
            "psi-check field {spec} seed {}: {passed}/{trials} trials hold\n",
            cli.seed
        ),
        code: if failures.is_empty() { 0 } else { 2 },
    })
}

fn cmd_dual_basis(cli: &Cli, elems: &[String]) -> CmdResult {
    let (spec, ctx) = field_of(cli)?;
    let (_, n) = extension_parts(&ctx)?;
    let v = elems
        .iter()
        .map(|s| ctx.parse_element(s))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(UsageError(format!(
            "expected {n} elements, got {}",
            v.len()
        )));
    }
    let shown = texts(&ctx, &v);
    match Basis::new(&ctx, v) {
        Ok(b) => {
            let dual = texts(&ctx, b.dual_elems());
            let mut gram_ok = true;
            for (i, &vi) in b.elems().iter().enumerate() {
                for (j, &uj) in b.dual_elems().iter().enumerate() {
                    gram_ok &= ctx.trace(ctx.mul(vi, uj))?.index() == (i == j) as u32;
                }
            }
            Ok(Report {
                json: json!({
                    "command": "dual-basis",
                    "field": spec,
                    "seed": cli.seed,
                    "basis": shown,
                    "is_basis": true,
                    "dual": dual,
                    "gram_check": gram_ok,
                }),
                text: format!(
                    "basis [{}]\ndual  [{}]\ngram check: {}\n",
                    shown.join(", "),
                    dual.join(", "),
                    yes(gram_ok)
                ),
                code: if gram_ok { 0 } else { 2 },
            })
        }
        Err(e) => Ok(Report {
            json: json!({
                "command": "dual-basis",
                "field": spec,
                "seed": cli.seed,
                "basis": shown,
                "is_basis": false,
                "dual": Value::Null,
                "error": e.to_string(),
            }),
            text: format!("[{}]: {e}\n", shown.join(", ")),
            code: 3,
        }),
    }
}

fn parse_epsilon(k: &Q2Field, text: &str) -> Result<Epsilon, UsageError> {
    let value = |v: &str| -> Result<u32, UsageError> {
        match v.trim().parse::<u32>() {
            Ok(i) => Ok(i),
            Err(_) => Ok(k.f.parse_element(v)?.index()),
        }
    };
    Ok(match text.trim() {
        "+omega" => Epsilon::PlusOmega,
        "-omega" => Epsilon::MinusOmega,
        "+omega2" => Epsilon::PlusOmegaSq,
        "-omega2" => Epsilon::MinusOmegaSq,
        other => match other.split_once(':') {
            Some(("base", v)) => Epsilon::Base(value(v)?),
            Some(("field", v)) => Epsilon::Field(value(v)?),
            _ => return Err(UsageError(format!("cannot parse epsilon `{other}`"))),
        },
    })
}

fn cmd_family(cli: &Cli, a: &FamilyArgs) -> CmdResult {
    let (k, params) = match &a.record {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            let rec: AgreementReport = serde_json::from_str(&raw)?;
            let k = q2(cli, rec.q)?;
            let p = params_from_report(&k, &rec)?;
            (k, p)
        }
        None => {
            let q = a.q.expect("required by clap");
            let family = a.family.expect("required by clap");
            let k = q2(cli, q)?;
            let sign = match a.sign {
                Some(SignArg::Plus) => Sign::Plus,
                Some(SignArg::Minus) => Sign::Minus,
                None => intrinsic_sign(family),
            };
            let fam1 = family == 1;
            let p = FamilyParams {
                family,
                q,
                m: a.m,
                n: a.n,
                alpha_idx: if fam1 {
                    Some(a.alpha.unwrap_or(0))
                } else {
                    None
                },
                beta_idx: if fam1 {
                    Some(a.beta.unwrap_or(1))
                } else {
                    None
                },
                omega_choice: (!fam1).then(|| a.omega.into()),
                sign,
                epsilon: parse_epsilon(&k, &a.epsilon)?,
            };
            (k, p)
        }
    };
    let poly = construct_family(&k, &params)?;
    let r = check_family(&k, &params)?;
    let mut json = serde_json::to_value(&r)?;
    json["command"] = json!("family");
    json["seed"] = json!(cli.seed);
    json["poly"] = json!(poly.format());
    let mut text = format!("{}\npolynomial {}\n", report_line(&r), poly.format());
    if let Some([x, y]) = &r.witness {
        let _ = writeln!(text, "collision: F({x}) = F({y})");
    }
    let _ = writeln!(text, "agree: {}", yes(r.agree));
    Ok(Report {
        json,
        text,
        code: if r.agree { 0 } else { 2 },
    })
}

fn status_text(s: &IdentityStatus) -> String {
    match s {
        IdentityStatus::Holds(n) => format!("holds for {n} coefficient choices"),
        IdentityStatus::NoWitness => "no admissible coefficient".into(),
        IdentityStatus::Fails { a, x } => format!("FAILS at a={a}, x={x}"),
    }
}

fn cmd_lemma31(cli: &Cli, q: u64, part: Option<u8>) -> CmdResult {
    let k = q2(cli, q)?;
    let parts: Vec<u8> = match part {
        Some(p) => vec![p],
        None => (1..=7)
            .filter(|&p| match p {
                2 | 3 => !q.is_multiple_of(3),
                4 | 6 => q % 3 == 1,
                5 | 7 => q % 3 == 2,
                _ => true,
            })
            .collect(),
    };
    let mut results = Vec::new();
    let mut text = String::new();
    let mut failed = false;
    for p in parts {
        let o = lemma31_check(&k, p)?;
        failed |= !o.status.counterexample_free();
        let _ = writeln!(text, "q={q} part {p}: {}", status_text(&o.status));
        results.push(o);
    }
    Ok(Report {
        json: json!({"command": "lemma31", "seed": cli.seed, "q": q, "results": results}),
        text,
        code: if failed { 2 } else { 0 },
    })
}

fn cmd_pentanomial(cli: &Cli, a: &PentArgs) -> CmdResult {
    let k = q2(cli, a.q)?;
    let p = k.p();
    let triples: Vec<[u64; 3]> = match &a.exps {
        Some(e) if e.len() == 3 => vec![[e[0], e[1], e[2]]],
        Some(e) => {
            return Err(UsageError(format!(
                "--exps needs 3 values, got {}",
                e.len()
            )))
        }
        None => {
            let pw: Vec<u64> = std::iter::successors(Some(1u64), |x| Some(x * p))
                .take_while(|&x| x <= a.q)
                .collect();
            let mut all = Vec::new();
            for &x in &pw {
                for &y in &pw {
                    for &z in &pw {
                        all.push([x, y, z]);
                    }
                }
            }
            all
        }
    };
    let alphas: Vec<usize> = match a.alpha {
        Some(i) => vec![i],
        None => (0..k.mu.len()).collect(),
    };
    let variants: Vec<PentVariant> = match a.variant {
        Some(VariantArg::Z1) => vec![PentVariant::Z1],
        Some(VariantArg::Z1q) => vec![PentVariant::Z1q],
        Some(VariantArg::Z2) => vec![PentVariant::Z2],
        Some(VariantArg::Z2q) => vec![PentVariant::Z2q],
        Some(VariantArg::Twisted) => alphas.iter().map(|&i| PentVariant::Twisted(i)).collect(),
        None => {
            let mut v = vec![
                PentVariant::Z1,
                PentVariant::Z1q,
                PentVariant::Z2,
                PentVariant::Z2q,
            ];
            if a.q % 3 == 2 {
                v.extend(alphas.iter().map(|&i| PentVariant::Twisted(i)));
            }
            v
        }
    };
    let omegas: Vec<OmegaChoice> = match a.omega {
        Some(o) => vec![o.into()],
        None => vec![OmegaChoice::Omega, OmegaChoice::OmegaSq],
    };
    let mut results = Vec::new();
    let mut text = String::new();
    let mut failed = 0;
    for t in &triples {
        for &v in &variants {
            for &w in &omegas {
                let o = pentanomial_identity_check(&k, *t, v, w)?;
                if !o.passed() {
                    failed += 1;
                    let _ =
                        writeln!(
                        text,
                        "FAIL q={} {:?} {v:?} omega={} e={}: identity {}, predicted {} oracle {}",
                        a.q, t, o.omega, o.exponent, status_text(&o.identity), o.predicted, o.oracle
                    );
                }
                results.push(o);
            }
        }
    }
    let _ = writeln!(
        text,
        "pentanomial q={}: {}/{} checks pass",
        a.q,
        results.len() - failed,
        results.len()
    );
    Ok(Report {
        json: json!({"command": "pentanomial", "seed": cli.seed, "q": a.q, "results": results}),
        text,
        code: if failed == 0 { 0 } else { 2 },
    })
}

fn cmd_lappano(cli: &Cli, q: u64, a: Option<u32>) -> CmdResult {
    let k = q2(cli, q)?;
    let coeffs: Vec<FieldElement> = match a {
        Some(i) => vec![k
            .fq
            .try_element(i as u64)
            .ok_or_else(|| UsageError(format!("no element {i} in F_{q}")))?],
        None => k.fq.nonzero_elements().collect(),
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut mismatches = 0;
    for c in coeffs {
        let (predicted, oracle) = lappano_check(&k, c)?;
        mismatches += (predicted != oracle) as u32;
        let a_text = k.fq.format_element(c);
        let _ = writeln!(
            text,
            "q={q} a={a_text}: predicted {} oracle {}{}",
            predicted,
            oracle,
            if predicted == oracle {
                ""
            } else {
                "  MISMATCH"
            }
        );
        rows.push(json!({"a": a_text, "predicted": predicted, "oracle": oracle, "agree": predicted == oracle}));
    }
    Ok(Report {
        json: json!({"command": "lappano", "seed": cli.seed, "q": q, "results": rows}),
        text,
        code: if mismatches == 0 { 0 } else { 2 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_forms() {
        let k = Q2Field::new(5, DEFAULT_CAP).unwrap();
        assert_eq!(parse_epsilon(&k, "base:2").unwrap(), Epsilon::Base(2));
        assert_eq!(parse_epsilon(&k, "-omega2").unwrap(), Epsilon::MinusOmegaSq);
        assert_eq!(parse_epsilon(&k, "field:(0,1)").unwrap(), Epsilon::Field(5));
        assert!(parse_epsilon(&k, "other").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
