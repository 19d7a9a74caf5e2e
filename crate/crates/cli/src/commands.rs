use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde_json::{json, Value};

use semicubic::arith::{int, parse_rational, pow10_neg, rat, to_f64, ExactRational};
use semicubic::oracle::{
    agreement_counts, find_violation_hk, sample_agreement_points, segment_scan, OracleOptions, OracleReport,
    Verdict, AGREEMENT_SEED,
};
use semicubic::polys::{run_named, CERTIFICATE_NAMES};
use semicubic::region::reference::SEGMENT_H;
use semicubic::region::{log_grid, starlike_certificate, tangent_limit_check, Extremum, ExtremumKind, Slice};
use semicubic::{Certificate, CertificateStatus, Curve, Derivation, CoefficientTables, WeightSequence, Witness};

use crate::config::{Format, RunConfig};
use crate::output::{g12, interval, num, pretty, q, qnum};
use crate::svg::{render, PlotSpec};
use crate::CliError;

const REGION_CHECKS: [&str; 2] = ["tangent-limits", "starlike"];

pub struct Context {
    pub cfg: RunConfig,
    tables: Option<CoefficientTables>,
    curve: OnceLock<Result<Curve, String>>,
}

impl Context {
    pub fn new(cfg: RunConfig, tables: Option<PathBuf>) -> Result<Context, CliError> {
        let tables = match tables {
            Some(p) => {
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| CliError::Usage(format!("cannot read tables {}: {e}", p.display())))?;
                let t = CoefficientTables::parse(&text)
                    .map_err(|e| CliError::Failure(format!("tables {}: {e}", p.display())))?;
                Some(t)
            }
            None => None,
        };
        Ok(Context { cfg, tables, curve: OnceLock::new() })
    }

    pub fn tables(&self) -> &CoefficientTables {
        self.tables.as_ref().unwrap_or_else(|| CoefficientTables::builtin())
    }

    pub fn curve(&self) -> Result<&Curve, CliError> {
        let Some(t) = &self.tables else {
            return Ok(Curve::builtin());
        };
        self.curve
            .get_or_init(|| Curve::certified(t, &Derivation::from_zeta(&t.zeta)).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| CliError::Failure(e.clone()))
    }

    fn oracle_options(&self, no_refine: bool) -> OracleOptions {
        OracleOptions {
            dim: self.cfg.dim,
            s_min: self.cfg.s_min,
            s_max: self.cfg.s_max,
            s_steps: self.cfg.s_steps,
            refine: !no_refine,
            ..Default::default()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes()).map_err(|e| CliError::Failure(format!("stdout: {e}")))
        }
    }
}

fn rational(name: &str, text: &str) -> Result<ExactRational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("--{name}: not a rational number: {text:?}")))
}

fn nonnegative(name: &str, text: &str) -> Result<ExactRational, CliError> {
    let v = rational(name, text)?;
    if v < int(0) {
        return Err(CliError::Usage(format!("--{name} must be nonnegative")));
    }
    Ok(v)
}

fn unsupported(f: Format, cmd: &str) -> CliError {
    CliError::Usage(format!("{cmd} does not support {f:?} output"))
}

fn region_check(ctx: &Context, name: &str) -> Certificate {
    match ctx.curve() {
        Ok(c) if name == "tangent-limits" => tangent_limit_check(c).certificate,
        Ok(c) => starlike_certificate(c, 50),
        Err(CliError::Failure(m) | CliError::Usage(m)) => Certificate {
            name: name.into(),
            status: CertificateStatus::Fail,
            witness: Some(Witness::Note(format!("curve unavailable: {m}"))),
            detail: String::new(),
        },
    }
}

pub fn verify(ctx: &Context, only: &[String]) -> Result<(), CliError> {
    let known: Vec<&str> = CERTIFICATE_NAMES.iter().chain(REGION_CHECKS.iter()).copied().collect();
    let selected: Vec<&str> = if only.is_empty() { known.clone() } else { only.iter().map(String::as_str).collect() };
    if let Some(bad) = selected.iter().find(|n| !known.contains(n)) {
        return Err(CliError::Usage(format!("unknown certificate {bad:?}; known: {}", known.join(", "))));
    }
    let table_names: Vec<&str> = selected.iter().copied().filter(|n| CERTIFICATE_NAMES.contains(n)).collect();
    let mut certs = run_named(ctx.tables(), &table_names).map_err(|n| CliError::Usage(format!("unknown certificate {n:?}")))?;
    for n in selected.iter().filter(|n| REGION_CHECKS.contains(n)) {
        certs.push(region_check(ctx, n));
    }
    let failed: Vec<&Certificate> = certs.iter().filter(|c| !c.passed()).collect();
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Json => {
            let list: Vec<Value> = certs.iter().map(|c| serde_json::to_value(c).expect("certificate json")).collect();
            pretty(&json!({ "certificates": list, "passed": failed.is_empty() })) + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for c in &certs {
                let info = match &c.witness {
                    Some(w) => format!("witness: {}", w.summary()),
                    None => c.detail.clone(),
                };
                s.push_str(&format!("{:<18} {:<4} {info}\n", c.name, if c.passed() { "pass" } else { "FAIL" }));
            }
            s.push_str(&format!("{}/{} passed\n", certs.len() - failed.len(), certs.len()));
            s
        }
        f => return Err(unsupported(f, "verify")),
    };
    emit(None, &text)?;
    if failed.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        Err(CliError::Failure(format!("certificates failed: {}", names.join(", "))))
    }
}

pub fn weights(ctx: &Context, x: &str, y: &str, n: usize) -> Result<(), CliError> {
    let (x, y) = (rational("x", x)?, rational("y", y)?);
    let w = WeightSequence::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;
    let list = w.first(n);
    let limit = w.limit_sq();
    let text = match ctx.cfg.format_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let mut s = String::from("n,weight_sq,decimal\n");
            for (i, v) in list.iter().enumerate() {
                s.push_str(&format!("{i},{v},{}\n", q(v)));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = list
                .iter()
                .enumerate()
                .map(|(i, v)| json!({ "n": i, "weight_sq": v.to_string(), "decimal": qnum(v) }))
                .collect();
            pretty(&json!({
                "psi0": w.psi0().to_string(),
                "psi1": w.psi1().to_string(),
                "limit_sq": interval(&limit.lo, &limit.hi),
                "weights": rows,
            })) + "\n"
        }
    };
    emit(None, &text)
}

pub fn classify(ctx: &Context, h: &str, k: &str) -> Result<(), CliError> {
    let (h, k) = (nonnegative("h", h)?, nonnegative("k", k)?);
    let v = ctx.curve()?.classify(&h, &k).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Text => format!("{} (sign of p = {})\n", v.status, v.p_sign),
        Format::Json => {
            pretty(&json!({ "h": h.to_string(), "k": k.to_string(), "status": v.status.to_string(), "p_sign": v.p_sign }))
                + "\n"
        }
        Format::Csv => format!("h,k,status,p_sign\n{},{},{},{}\n", q(&h), q(&k), v.status, v.p_sign),
    };
    emit(None, &text)
}

pub fn trace(ctx: &Context, out: Option<&Path>) -> Result<(), CliError> {
    let c = &ctx.cfg;
    let curve = ctx.curve()?;
    let grid = log_grid(c.t_min, c.t_max, c.samples);
    let samples = curve.trace(&grid, &c.tol).map_err(|e| CliError::Failure(e.to_string()))?;
    let kappa = |s| curve.curvature(s).unwrap_or(f64::NAN);
    let text = match c.format_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,h_lo,h_hi,k,slope,curvature\n");
            for p in &samples {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    q(&p.t),
                    q(&p.h.lo),
                    q(&p.h.hi),
                    g12(p.k_mid()),
                    g12(p.slope),
                    g12(kappa(p))
                ));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|p| {
                    json!({
                        "t": qnum(&p.t),
                        "h_lo": qnum(&p.h.lo),
                        "h_hi": qnum(&p.h.hi),
                        "k": num(p.k_mid()),
                        "slope": num(p.slope),
                        "curvature": num(kappa(p)),
                    })
                })
                .collect();
            pretty(&Value::Array(rows)) + "\n"
        }
        f => return Err(unsupported(f, "trace")),
    };
    emit(out, &text)
}

fn slice_json(axis: &str, at: &ExactRational, s: &Slice) -> Value {
    let roots: Vec<Value> = s.roots.iter().map(|r| interval(&r.lo, &r.hi)).collect();
    json!({ "axis": axis, "at": at.to_string(), "kind": serde_json::to_value(s.kind).expect("kind"), "roots": roots })
}

pub fn slice(ctx: &Context, h: Option<&str>, k: Option<&str>) -> Result<(), CliError> {
    let curve = ctx.curve()?;
    let tol = &ctx.cfg.tol;
    let (axis, other, at, s) = match (h, k) {
        (Some(h), _) => {
            let v = rational("h", h)?;
            if v <= int(0) {
                return Err(CliError::Usage("--h must be positive".into()));
            }
            let s = curve.k_interval_tol(&v, tol).map_err(|e| CliError::Usage(e.to_string()))?;
            ("h", "k", v, s)
        }
        (None, Some(k)) => {
            let v = rational("k", k)?;
            if v <= int(0) {
                return Err(CliError::Usage("--k must be positive".into()));
            }
            let s = curve.h_interval_tol(&v, tol).map_err(|e| CliError::Usage(e.to_string()))?;
            ("k", "h", v, s)
        }
        (None, None) => return Err(CliError::Usage("give --h or --k".into())),
    };
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Json => pretty(&slice_json(axis, &at, &s)) + "\n",
        Format::Text => {
            let mut out = format!("{axis} = {}: {:?}, {} root(s)\n", q(&at), s.kind, s.roots.len());
            for r in &s.roots {
                out.push_str(&format!("{other} in [{}, {}]\n", q(&r.lo), q(&r.hi)));
            }
            out
        }
        Format::Csv => {
            let mut out = format!("{other}_lo,{other}_hi\n");
            for r in &s.roots {
                out.push_str(&format!("{},{}\n", q(&r.lo), q(&r.hi)));
            }
            out
        }
    };
    emit(None, &text)
}

pub fn profile(ctx: &Context, h: &str) -> Result<(), CliError> {
    let h = rational("h", h)?;
    let p = ctx.curve()?.descartes_profile(&h).map_err(|e| CliError::Usage(e.to_string()))?;
    let regime = serde_json::to_value(p.regime).expect("regime");
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Json => pretty(&json!({ "h": h.to_string(), "signs": p.signs, "variations": p.variations, "regime": regime })) + "\n",
        Format::Text => {
            let signs: String = p.signs.iter().map(|s| match s { 1 => '+', -1 => '-', _ => '0' }).collect();
            format!("h = {}: signs {signs}, {} variations, {}\n", q(&h), p.variations, regime.as_str().unwrap_or(""))
        }
        Format::Csv => {
            let signs: Vec<String> = p.signs.iter().map(i8::to_string).collect();
            format!("h,variations,regime,{}\n{},{},{},{}\n",
                (0..10).map(|i| format!("s{i}")).collect::<Vec<_>>().join(","),
                q(&h), p.variations, regime.as_str().unwrap_or(""), signs.join(","))
        }
    };
    emit(None, &text)
}

fn extremum_json(e: &Extremum) -> Value {
    json!({
        "kind": e.kind.label(),
        "value": interval(&e.value.lo, &e.value.hi),
        "t_star": interval(&e.t_star.lo, &e.t_star.hi),
        "scan": interval(&e.scan.value.lo, &e.scan.value.hi),
        "system": interval(&e.system.value.lo, &e.system.value.hi),
        "grid_local_maxima": e.grid_local_maxima,
    })
}

fn both_extrema(ctx: &Context) -> Result<(Extremum, Extremum), CliError> {
    let curve = ctx.curve()?;
    let tol = &ctx.cfg.tol;
    let h = curve.extremal_h(tol).map_err(|e| CliError::Failure(e.to_string()))?;
    let k = curve.extremal_k(tol).map_err(|e| CliError::Failure(e.to_string()))?;
    Ok((h, k))
}

pub fn extrema(ctx: &Context) -> Result<(), CliError> {
    let (h, k) = both_extrema(ctx)?;
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Json => pretty(&json!({ "h_M": extremum_json(&h), "k_M": extremum_json(&k) })) + "\n",
        Format::Text => {
            let line = |e: &Extremum| {
                format!(
                    "{} in [{}, {}] at t in [{}, {}]; scan {} system {}; {} grid maxima\n",
                    e.kind.label(),
                    q(&e.value.lo),
                    q(&e.value.hi),
                    q(&e.t_star.lo),
                    q(&e.t_star.hi),
                    g12(e.scan.value.mid_f64()),
                    g12(e.system.value.mid_f64()),
                    e.grid_local_maxima
                )
            };
            line(&h) + &line(&k)
        }
        Format::Csv => {
            let row = |e: &Extremum| {
                format!("{},{},{},{},{}\n", e.kind.label(), q(&e.value.lo), q(&e.value.hi), q(&e.t_star.lo), q(&e.t_star.hi))
            };
            String::from("kind,lo,hi,t_lo,t_hi\n") + &row(&h) + &row(&k)
        }
    };
    emit(None, &text)
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::NoViolationFound => json!({ "kind": "no_violation" }),
        Verdict::ViolationAt(s) => json!({ "kind": "violation", "s": num(*s) }),
    }
}

fn verdict_word(v: &Verdict) -> &'static str {
    if v.is_violation() {
        "violation"
    } else {
        "no_violation"
    }
}

fn report_json(r: &OracleReport) -> Value {
    json!({
        "h": num(r.point.0),
        "k": num(r.point.1),
        "power": r.power,
        "dim": r.dim,
        "verdict": verdict_json(&r.verdict),
        "worst_min_eig": num(r.worst_min_eig()),
        "s_grid": r.s_grid.iter().map(|s| num(*s)).collect::<Vec<_>>(),
        "min_eigs": r.min_eigs.iter().map(|s| num(*s)).collect::<Vec<_>>(),
    })
}

pub fn oracle(ctx: &Context, h: f64, k: f64, power: usize, no_refine: bool) -> Result<(), CliError> {
    let r = find_violation_hk(h, k, power, &ctx.oracle_options(no_refine)).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = match ctx.cfg.format_or(Format::Text) {
        Format::Json => pretty(&report_json(&r)) + "\n",
        Format::Csv => {
            let mut s = String::from("s,min_eig\n");
            for (a, b) in r.s_grid.iter().zip(&r.min_eigs) {
                s.push_str(&format!("{},{}\n", g12(*a), g12(*b)));
            }
            s
        }
        Format::Text => {
            let v = match r.verdict {
                Verdict::NoViolationFound => "no violation found".to_string(),
                Verdict::ViolationAt(s) => format!("violation at s = {}", g12(s)),
            };
            format!(
                "h = {}, k = {}, m = {}, N = {}: {v}; worst scaled min eigenvalue {} over {} values of s\n",
                g12(h),
                g12(k),
                power,
                r.dim,
                g12(r.worst_min_eig()),
                r.s_grid.len()
            )
        }
    };
    emit(None, &text)
}

pub fn compare(
    ctx: &Context,
    h: f64,
    (k_min, k_max, steps): (f64, f64, usize),
    spacing: &str,
    no_refine: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if !(k_min > 0.0 && k_max > k_min) || steps < 2 {
        return Err(CliError::Usage("need 0 < k-min < k-max and k-steps >= 2".into()));
    }
    let grid: Vec<f64> = match spacing {
        "linear" => (0..steps).map(|i| k_min + (k_max - k_min) * i as f64 / (steps - 1) as f64).collect(),
        "log" => {
            let (a, b) = (k_min.ln(), k_max.ln());
            (0..steps).map(|i| (a + (b - a) * i as f64 / (steps - 1) as f64).exp()).collect()
        }
        _ => return Err(CliError::Usage(format!("--spacing must be linear or log, got {spacing:?}"))),
    };
    let opt = ctx.oracle_options(no_refine);
    let m2 = segment_scan(h, &grid, 2, &opt).map_err(|e| CliError::Usage(e.to_string()))?;
    let m3 = segment_scan(h, &grid, 3, &opt).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut s = String::from("k,m2_verdict,m3_verdict,worst_min_eig_m2,worst_min_eig_m3\n");
    for ((k, a), b) in grid.iter().zip(&m2).zip(&m3) {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            g12(*k),
            verdict_word(&a.verdict),
            verdict_word(&b.verdict),
            g12(a.worst_min_eig()),
            g12(b.worst_min_eig())
        ));
    }
    emit(out, &s)
}

pub fn plot(
    ctx: &Context,
    out: Option<&Path>,
    annotate: &[String],
    segment: Option<f64>,
    (width, height): (f64, f64),
    shade: usize,
) -> Result<(), CliError> {
    if let Some(bad) = annotate.iter().find(|a| a.as_str() != "extrema") {
        return Err(CliError::Usage(format!("unknown annotation {bad:?} (extrema)")));
    }
    if !(width >= 200.0 && height >= 200.0) {
        return Err(CliError::Usage("width and height must be at least 200".into()));
    }
    let curve = ctx.curve()?;
    let grid = log_grid(ctx.cfg.t_min, ctx.cfg.t_max, ctx.cfg.samples);
    let trace = curve.trace(&grid, &ctx.cfg.tol).map_err(|e| CliError::Failure(e.to_string()))?;
    let extrema = if annotate.is_empty() {
        None
    } else {
        let (h, k) = both_extrema(ctx)?;
        let point = |e: &Extremum| {
            let t = e.t_star.midpoint();
            match e.kind {
                ExtremumKind::HMax => (e.value.mid_f64(), e.value.mid_f64() * to_f64(&t)),
                ExtremumKind::KMax => (e.value.mid_f64() / to_f64(&t), e.value.mid_f64()),
            }
        };
        Some((point(&h), point(&k)))
    };
    let spec = PlotSpec { width, height, h_max: 0.15, k_max: 0.15, shade, extrema, segment };
    emit(out, &render(curve, &trace, &spec))
}

pub fn report(ctx: &Context, out: Option<&Path>, points: usize) -> Result<(), CliError> {
    let curve = ctx.curve()?;
    let (h, k) = both_extrema(ctx)?;
    let eps6 = curve.epsilon_cell(6, 7);
    let seg = curve.k_interval_tol(&rat(1, 100), &pow10_neg(15)).map_err(|e| CliError::Failure(e.to_string()))?;
    let certs = run_named(ctx.tables(), &CERTIFICATE_NAMES).expect("known names");
    let statuses: serde_json::Map<String, Value> = certs
        .iter()
        .chain([region_check(ctx, "tangent-limits"), region_check(ctx, "starlike")].iter())
        .map(|c| (c.name.clone(), json!(if c.passed() { "pass" } else { "fail" })))
        .collect();
    let opt = ctx.oracle_options(false);
    let trace = curve.default_trace();
    let sample = sample_agreement_points(curve, &trace, points, 1e-3, AGREEMENT_SEED);
    let counts = agreement_counts(&sample, 3, &opt);
    let v = json!({
        "h_M": extremum_json(&h),
        "k_M": extremum_json(&k),
        "epsilon6": eps6.map(|c| interval(&c.lo, &c.hi)),
        "boundary_roots_h_0_01": {
            "h": num(SEGMENT_H),
            "roots": seg.roots.iter().map(|r| interval(&r.lo, &r.hi)).collect::<Vec<_>>(),
        },
        "certificates": statuses,
        "oracle_agreement": {
            "power": 3,
            "dim": opt.dim,
            "min_depth": num(1e-3),
            "inside": counts.inside,
            "inside_no_violation": counts.inside_quiet,
            "outside": counts.outside,
            "outside_violation": counts.outside_caught,
        },
    });
    emit(out, &(pretty(&v) + "\n"))?;
    Ok(())
}
