use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use langlands_desk::affine_generic::{count_generic, invariant_monomial_value, is_affine_generic, torus_orbit_is_stable, FrattiniQuotient};
use langlands_desk::algebra::rat_text;
use langlands_desk::cartan::cartan_data;
use langlands_desk::crystal::{
    calibration_ratio, calibration_report, predicted_degree_two_ratio, solve_frobenius_ode, CrystalConfig,
};
use langlands_desk::gauge::{
    build_connection, change_to_infinity, closed_form, coxeter_eigenvalues, kostant_check, pipeline,
    slope_at_infinity_with,
};
use langlands_desk::io::{
    formal_degree_report, parse_curve_json, parse_formal_degree_request, parse_slope_request, MAX_INPUT,
};
use langlands_desk::kloosterman::{rationality_report, satake_trace, weil_bound, weil_bound_check, KloostermanQuery};
use langlands_desk::ledger::run_ledger;
use langlands_desk::zeta_count::{count_ff, count_nf, validate_curve};
use langlands_desk::{Error, Result, SimpleType};

/// Exact computations around simple supercuspidals, Kloosterman sums and
/// their connections.
#[derive(Parser, Debug)]
#[command(name = "langlands-desk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root datum invariants of a simple type.
    Cartan {
        #[arg(long = "type")]
        ty: SimpleType,
    },
    /// Formal degree against the adjoint gamma-factor prediction.
    FormalDegree(FormalDegreeArgs),
    /// Affine genericity of a functional on the Frattini quotient.
    AffineGeneric(AffineArgs),
    /// Function-field main term from zeta special values.
    CountFf(CountFfArgs),
    /// Number-field main term from Bernoulli numbers.
    CountNf(CountNfArgs),
    /// Kloosterman sums as cyclotomic integers.
    Kloosterman(KloostermanArgs),
    /// Slope at infinity and the Kostant/Coxeter checks.
    Slope(SlopeArgs),
    /// Truncated Frobenius structure and its calibration against Kl_2.
    Crystal(CrystalArgs),
    /// Recompute the table of golden values.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// JSON request given inline or read from a file (`-` for stdin).
#[derive(Args, Debug)]
struct JsonInput {
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
    #[arg(long)]
    input: Option<String>,
}

impl JsonInput {
    fn read(&self) -> Result<Option<String>> {
        if let Some(text) = &self.json {
            return Ok(Some(text.clone()));
        }
        let Some(path) = &self.input else { return Ok(None) };
        let mut buf = Vec::new();
        let res = if path == "-" {
            std::io::stdin().take(MAX_INPUT as u64 + 1).read_to_end(&mut buf)
        } else {
            std::fs::File::open(path).and_then(|f| f.take(MAX_INPUT as u64 + 1).read_to_end(&mut buf))
        };
        res.map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
        if buf.len() > MAX_INPUT {
            return Err(Error::Input(format!("input exceeds {MAX_INPUT} bytes")));
        }
        String::from_utf8(buf).map(Some).map_err(|_| Error::Input("input is not UTF-8".into()))
    }
}

#[derive(Args, Debug)]
struct FormalDegreeArgs {
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    /// depth0, simple-sc or custom (custom needs a JSON request).
    #[arg(long)]
    scenario: Option<String>,
    #[command(flatten)]
    request: JsonInput,
}

#[derive(Args, Debug)]
struct AffineArgs {
    #[arg(long = "type")]
    ty: SimpleType,
    #[arg(long)]
    q: u64,
    /// Coordinates of the functional as field-element indices, one per affine simple root.
    #[arg(long, value_delimiter = ',')]
    f: Vec<u64>,
    /// Also count the generic functionals by enumeration.
    #[arg(long)]
    count: bool,
}

#[derive(Args, Debug)]
struct CountFfArgs {
    #[arg(long = "type")]
    ty: SimpleType,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    genus: Option<u64>,
    /// Coefficients of P, constant term first (defaults to 1 in genus 0).
    #[arg(long = "P", value_delimiter = ',', allow_hyphen_values = true)]
    p: Vec<i64>,
    /// Degrees of the places in S.
    #[arg(long = "S", value_delimiter = ',')]
    s: Vec<u64>,
    /// Degrees of the places in T.
    #[arg(long = "T", value_delimiter = ',')]
    t: Vec<u64>,
    /// Curve as {"q":..,"g":..,"P":[..]}.
    #[command(flatten)]
    curve: JsonInput,
}

#[derive(Args, Debug)]
struct CountNfArgs {
    #[arg(long = "type")]
    ty: SimpleType,
    /// Primes in S.
    #[arg(long = "S", value_delimiter = ',')]
    s: Vec<u64>,
    /// Primes in T.
    #[arg(long = "T", value_delimiter = ',')]
    t: Vec<u64>,
    #[arg(long = "dim-v", default_value_t = 1)]
    dim_v: u64,
}

#[derive(Args, Debug)]
struct KloostermanArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Residue a of the additive character x -> zeta_p^{a tr x}.
    #[arg(long, default_value_t = 1)]
    psi: u64,
    /// A single t (field-element index); otherwise sweep all of F_q^*.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SlopeArgs {
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[command(flatten)]
    request: JsonInput,
}

#[derive(Args, Debug)]
struct CrystalArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    /// Include the per-t rows of the calibration sweep.
    #[arg(long = "t-sweep")]
    t_sweep: bool,
    /// Sweep over F_p (1) or F_{p^2} (2).
    #[arg(long, default_value_t = 1)]
    degree: usize,
}

enum Output {
    Json(Value),
    Raw(String),
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("LANGLANDS_DESK_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Input(format!("LANGLANDS_DESK_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

fn formal_degree(a: &FormalDegreeArgs) -> Result<Value> {
    let text = match a.request.read()? {
        Some(t) => {
            if a.ty.is_some() || a.q.is_some() || a.scenario.is_some() {
                return Err(Error::Input("give either flags or a JSON request".into()));
            }
            t
        }
        None => {
            let (Some(ty), Some(q), Some(scenario)) = (&a.ty, a.q, &a.scenario) else {
                return Err(Error::Input("--type, --q and --scenario are required".into()));
            };
            json!({ "type": ty, "q": q, "scenario": scenario }).to_string()
        }
    };
    formal_degree_report(&parse_formal_degree_request(&text)?)
}

fn affine_generic(a: &AffineArgs) -> Result<Value> {
    let v = FrattiniQuotient::new(&cartan_data(a.ty), a.q)?;
    let f = v.vector(&a.f)?;
    let monomial = invariant_monomial_value(&f, &v)?;
    let mut out = json!({
        "generic": is_affine_generic(&f, &v)?,
        "monomial": monomial.to_string(),
        "stable": torus_orbit_is_stable(&f, &v)?,
        "dimension": v.dimension(),
    });
    if a.count {
        out["generic_count"] = json!(count_generic(&v)?);
    }
    Ok(out)
}

fn count_ff_cmd(a: &CountFfArgs) -> Result<Value> {
    let curve = match a.curve.read()? {
        Some(text) => {
            if a.q.is_some() || a.genus.is_some() || !a.p.is_empty() {
                return Err(Error::Input("give the curve either by flags or as JSON".into()));
            }
            parse_curve_json(&text)?
        }
        None => {
            let (Some(q), Some(g)) = (a.q, a.genus) else {
                return Err(Error::Input("--q and --genus (or a curve JSON) are required".into()));
            };
            let coeffs: Vec<_> = if a.p.is_empty() && g == 0 { vec![1.into()] } else { a.p.iter().map(|&c| c.into()).collect() };
            validate_curve(q, g, &coeffs)?
        }
    };
    let data = cartan_data(a.ty);
    let c = count_ff(&data, &curve, &a.s, &a.t)?;
    Ok(json!({
        "count": c.count.to_string(),
        "exact": !c.center_caveat,
        "center_caveat": c.center_caveat,
        "zeta_st": c.poly.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "factors": c.factors,
        "weil_warnings": c.weil_warnings,
    }))
}

fn count_nf_cmd(a: &CountNfArgs) -> Result<Value> {
    let c = count_nf(&cartan_data(a.ty), &a.s, &a.t, a.dim_v)?;
    Ok(json!({ "count": c.value_text(), "exact": c.exact, "factors": c.factors }))
}

fn kloosterman(a: &KloostermanArgs) -> Result<Output> {
    if let Some(t) = a.t {
        let query = KloostermanQuery { n: a.n, q: a.q, t, psi_residue: a.psi };
        let value = langlands_desk::kloosterman::kloosterman_sum(&query)?;
        let abs: Vec<f64> = value.embeddings().iter().map(|z| z.norm()).collect();
        let out = json!({
            "t": t,
            "value": value.to_json(),
            "satake_trace": satake_trace(&query)?.to_json(),
            "embedding_abs": abs,
            "bound": weil_bound(a.n, a.q),
            "pass": weil_bound_check(&value, a.n, a.q),
        });
        return Ok(Output::Json(out));
    }
    let r = rationality_report(a.q, a.n, a.psi)?;
    if !r.passed() {
        return Err(Error::Internal(format!(
            "sweep checks failed: integral {}, galois {}, conjugation {}, sum {}, weil {}",
            r.all_integral, r.galois_ok, r.conjugation_ok, r.sum_ok, r.weil_ok
        )));
    }
    match a.format {
        Format::Json => Ok(Output::Json(serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?)),
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(["t", "coeffs", "embedding_abs", "bound", "pass"]).map_err(csv_err)?;
            for row in &r.rows {
                let abs: Vec<String> = row.embedding_abs.iter().map(|x| format!("{x:.12}")).collect();
                w.write_record([
                    row.t.to_string(),
                    row.value["coeffs"]
                        .as_array()
                        .map(|c| c.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(";"))
                        .unwrap_or_default(),
                    abs.join(";"),
                    format!("{:.12}", row.bound),
                    if row.weil_ok && row.integral { "pass" } else { "fail" }.to_string(),
                ])
                .map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Output::Raw(String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))?))
        }
    }
}

fn slope(a: &SlopeArgs) -> Result<Value> {
    let text = match a.request.read()? {
        Some(t) => t,
        None => {
            let (Some(ty), Some(rank)) = (&a.ty, a.rank) else {
                return Err(Error::Input("--type and --rank (or a JSON request) are required".into()));
            };
            json!({ "type": ty, "rank": rank }).to_string()
        }
    };
    let data = parse_slope_request(&text)?;
    let stages = pipeline(&data)?;
    let at_inf = change_to_infinity(&build_connection(&data))?;
    let (slope, witness) = slope_at_infinity_with(&at_inf, at_inf.a.size() as u64)?;
    let kostant = kostant_check(&data)?;
    let coxeter = coxeter_eigenvalues(&data)?;
    Ok(json!({
        "stages": {
            "t_chart": stages.t_chart.to_json(),
            "s_chart": stages.s_chart.to_json(),
            "cover": stages.cover.to_json(),
            "gauged": stages.gauged.to_json(),
        },
        "closed_form": closed_form(&data).to_json(),
        "closed_form_match": stages.gauged == closed_form(&data),
        "slope": rat_text(&slope),
        "witness": witness,
        "charpoly": kostant.charpoly.display_in("x"),
        "squarefree": kostant.squarefree,
        "centralizer_dim": kostant.centralizer_dim,
        "regular_semisimple": kostant.regular_semisimple,
        "exponents": coxeter.exponents,
        "exponents_primitive": coxeter.all_primitive,
    }))
}

fn crystal(a: &CrystalArgs) -> Result<Value> {
    let p = a.p;
    let cfg = CrystalConfig::new(
        p,
        a.m.unwrap_or(2 * p as usize),
        a.k.unwrap_or(3 * (p.saturating_sub(1)) as usize),
    )?;
    let sol = solve_frobenius_ode(&cfg)?;
    let residual_vanishes = sol.residual()?.iter().flatten().flatten().all(|x| x.is_zero());
    let det = sol.determinant()?;
    let det_is_p = det[0] == det[0].from_int_like(p as i64) && det[1..].iter().all(|x| x.is_zero());
    let mut report = serde_json::to_value(calibration_report(&sol, a.degree)?).map_err(|e| Error::Internal(e.to_string()))?;
    if !a.t_sweep {
        if let Some(obj) = report.as_object_mut() {
            obj.remove("rows");
        }
    }
    let mut out = json!({
        "config": { "p": cfg.p, "M": cfg.m, "K": cfg.k },
        "beta": sol.beta.coeffs().iter().map(rat_text).collect::<Vec<_>>(),
        "residual_vanishes": residual_vanishes,
        "determinant_is_p": det_is_p,
        "constant_term_conjugates_N": sol.constant_term_conjugates_n(),
        "trusted_precision": sol.trusted_precision(),
        "calibration": report,
    });
    if a.degree == 2 {
        let k = sol.trusted_precision();
        let c1 = calibration_ratio(&sol, 1)?;
        let c2 = calibration_ratio(&sol, 2)?;
        let predicted = predicted_degree_two_ratio(&c1).over_unramified(c2.modulus());
        out["degree_two"] = json!({
            "ratio_1": c1.truncate(k).to_json(),
            "ratio_2": c2.truncate(k).to_json(),
            "predicted_ratio_2": predicted.truncate(k).to_json(),
            "match": predicted.truncate(k) == c2.truncate(k),
        });
    }
    Ok(out)
}

fn verify_paper(format: Format) -> Result<(Output, bool)> {
    let r = run_ledger();
    let ok = r.all_passed();
    let out = match format {
        Format::Json => Output::Json(serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &r.entries {
                w.serialize(e).map_err(|e| Error::Internal(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            Output::Raw(String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))?)
        }
        Format::Text => {
            let width = r.entries.iter().map(|e| e.check.len()).max().unwrap_or(0);
            let mut s = String::new();
            for e in &r.entries {
                let mark = if e.pass { "pass" } else { "FAIL" };
                s.push_str(&format!("{mark}  {:width$}  {}", e.check, e.actual));
                if !e.pass {
                    s.push_str(&format!("  (expected {})", e.expected));
                }
                s.push('\n');
            }
            s.push_str(&format!("{} passed, {} failed\n", r.passed, r.failed));
            Output::Raw(s)
        }
    };
    Ok((out, ok))
}

fn run(cli: &Cli) -> Result<(Output, bool)> {
    configure_threads()?;
    let json = |v: Result<Value>| v.map(|v| (Output::Json(v), true));
    match &cli.command {
        Command::Cartan { ty } => json(Ok(cartan_data(*ty).to_json())),
        Command::FormalDegree(a) => json(formal_degree(a)),
        Command::AffineGeneric(a) => json(affine_generic(a)),
        Command::CountFf(a) => json(count_ff_cmd(a)),
        Command::CountNf(a) => json(count_nf_cmd(a)),
        Command::Kloosterman(a) => kloosterman(a).map(|o| (o, true)),
        Command::Slope(a) => json(slope(a)),
        Command::Crystal(a) => json(crystal(a)),
        Command::VerifyPaper { format } => verify_paper(*format),
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn error_json(kind: &str, message: &str) -> String {
    format!("{}\n", json!({ "error": { "kind": kind, "message": message } }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprint!("{msg}");
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            emit(&error_json("input", first));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((Output::Json(v), ok)) => {
            emit(&format!("{v}\n"));
            ExitCode::from(if ok { 0 } else { 3 })
        }
        Ok((Output::Raw(s), ok)) => {
            emit(&s);
            ExitCode::from(if ok { 0 } else { 3 })
        }
        Err(e) => {
            eprintln!("langlands-desk: {e}");
            emit(&error_json(e.kind(), &e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
