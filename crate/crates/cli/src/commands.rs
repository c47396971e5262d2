use std::process::ExitCode;

use quadtwist::analytic::{birch_manin_check, real::to_f64, LSeriesContext};
use quadtwist::arith::{format_rational, QuadraticCharacter, TwoAdic};
use quadtwist::modsym::{rational_newforms, CalibratedForm};
use quadtwist::twist::suite::{self, SuiteConfig};
use quadtwist::twist::TwistEngine;
use quadtwist::verifier::{generate_table, parse_class, scan_class, verify_twist, TwistReport};
use quadtwist::{Error, Result};
use serde_json::{json, Value};

use crate::cache;
use crate::output::{csv_string, put_valuation, text_table, Format, TableRow};
use crate::select::{self, CurveArgs, EIGENVALUE_BOUND};

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn meta(cf: &CalibratedForm, engine: &TwistEngine) -> Result<Value> {
    let mut o = json!({
        "level": engine.level(),
        "label": cf.report.label,
        "lattice_shape": engine.shape().to_string(),
        "t1": format_rational(&engine.t1()?),
    });
    put_valuation(&mut o, "v2_t1", engine.t1()?.v2());
    if engine.level() % 2 == 1 {
        o["t4"] = json!(format_rational(&engine.t4()?));
        put_valuation(&mut o, "v2_t4", engine.t4()?.v2());
    }
    Ok(o)
}

pub fn newform(args: &CurveArgs, bound: usize, format: Format) -> Result<ExitCode> {
    let Some(_) = select::find_curve(args)? else {
        return uncalibrated_newforms(args.level.expect("level given"), bound, format);
    };
    let cf = select::calibrated(args)?;
    let engine = TwistEngine::new(&cf.form)?;
    let an = cf.context.coefficients(bound)?;
    let mut o = meta(&cf, &engine)?;
    o["a_n"] = json!(an[1..].to_vec());
    o["omega_plus"] = json!(cf.report.periods.omega_plus);
    o["omega_minus"] = json!(cf.report.periods.omega_minus);
    o["root_number"] = json!(cf.report.root_number);
    o["calibration"] = serde_json::to_value(&cf.report).expect("json");
    match format {
        Format::Json => print_json(&o),
        _ => {
            println!("{} (level {})", cf.report.label, engine.level());
            println!("a_1..a_{bound}: {}", join(&an[1..]));
            println!("lattice: {}", engine.shape());
            println!(
                "T_1 = {} (v2 {})",
                format_rational(&engine.t1()?),
                engine.t1()?.v2().to_field()
            );
            if engine.level() % 2 == 1 {
                println!(
                    "T_4 = {} (v2 {})",
                    format_rational(&engine.t4()?),
                    engine.t4()?.v2().to_field()
                );
            }
            println!(
                "Omega+ = {:.15}, Omega- = {:.15}, root number {:+}",
                cf.report.periods.omega_plus, cf.report.periods.omega_minus, cf.report.root_number
            );
            for c in &cf.report.shape_conflicts {
                println!("note: {c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}

fn uncalibrated_newforms(level: u64, bound: usize, format: Format) -> Result<ExitCode> {
    let space = cache::load_space(level)?;
    if space.genus() == 0 {
        return Err(Error::NoRationalNewform(level));
    }
    let forms = rational_newforms(&space, EIGENVALUE_BOUND)?;
    if forms.is_empty() {
        return Err(Error::NoRationalNewform(level));
    }
    let mut out = Vec::new();
    for f in forms {
        let f2 = f.clone();
        let ctx = LSeriesContext::new(level, 64, move |p| f2.ap(p))?;
        out.push(ctx.coefficients(bound)?[1..].to_vec());
    }
    match format {
        Format::Json => print_json(&json!({
            "level": level,
            "calibrated": false,
            "forms": out.iter().map(|a| json!({ "a_n": a })).collect::<Vec<_>>(),
        })),
        _ => {
            println!("level {level}: {} rational newform(s); no curve model, so no calibration", out.len());
            for a in &out {
                println!("a_1..a_{bound}: {}", join(a));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn table(args: &CurveArgs, n: u8, min_q: u64, max_q: u64, format: Format) -> Result<ExitCode> {
    let cf = select::calibrated(args)?;
    let engine = TwistEngine::new(&cf.form)?;
    let reports = generate_table(&engine, n, min_q, max_q)?;
    let rows: Vec<TableRow> = reports.iter().map(TableRow::from_report).collect();
    match format {
        Format::Csv => print!("{}", csv_string(&rows)),
        Format::Json => {
            let mut m = meta(&cf, &engine)?;
            m["n"] = json!(n);
            print_json(&json!({
                "meta": m,
                "rows": rows.iter().map(TableRow::to_json).collect::<Vec<_>>(),
            }))
        }
        Format::Text => print!("{}", text_table(&rows)),
    }
    Ok(ExitCode::SUCCESS)
}

fn report_json(r: &TwistReport) -> Value {
    let mut o = json!({
        "label": r.label,
        "level": r.level,
        "n": r.n,
        "m": r.m,
        "modulus": r.modulus,
        "primes": r.classes.iter().map(|c| json!({
            "q": c.q, "sign": c.sign, "class": c.name(),
        })).collect::<Vec<_>>(),
        "r": r.r,
        "w_m": r.w_m,
        "tau_shift": r.tau_shift,
        "bound_general": r.bound.general,
        "bound_plus": r.bound.plus.applicable(),
        "bound_uniform": r.bound.plus_formula,
        "bound_applicable": r.bound.applicable,
        "inequality_holds": r.inequality_holds,
        "equality_condition_met": r.equality_condition_met,
        "equality_attained": r.equality_attained,
    });
    put_valuation(&mut o, "v_m", r.v_m);
    put_valuation(&mut o, "v2_t_m", r.t_m_v2);
    put_valuation(&mut o, "v2_algebraic_part", r.actual);
    o
}

pub fn verify(args: &CurveArgs, n: u8, m: u64, format: Format) -> Result<ExitCode> {
    let cf = select::calibrated(args)?;
    let engine = TwistEngine::new(&cf.form)?;
    let r = verify_twist(&engine, n, m)?;
    let ok = r.inequality_holds && (!r.equality_condition_met || r.equality_attained);
    match format {
        Format::Json => print_json(&report_json(&r)),
        _ => {
            let classes: Vec<String> = r.classes.iter().map(|c| format!("{} {}", c.q, c.name())).collect();
            println!("{} M = {} (n = {}, m = {})", r.label, r.modulus, r.n, r.m);
            println!("primes: {}", classes.join(", "));
            println!("r = {}, v_m = {}, w_m = {}", r.r, r.v_m.to_field(), r.w_m);
            println!(
                "v2(L/Omega) = {} (v2(T_M) = {}, v2(tau) = {})",
                r.actual.to_field(),
                r.t_m_v2.to_field(),
                r.tau_shift
            );
            let plus = r.bound.plus.applicable().map_or("not applicable".to_string(), i64::to_string);
            println!(
                "bounds: general {}, sharper {plus}, applicable {}",
                r.bound.general, r.bound.applicable
            );
            println!(
                "inequality {}, equality condition {}, equality {}",
                if r.inequality_holds { "holds" } else { "FAILS" },
                if r.equality_condition_met { "met" } else { "not met" },
                if r.equality_attained { "attained" } else { "not attained" }
            );
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn scan(args: &CurveArgs, class: &str, count: usize, format: Format) -> Result<ExitCode> {
    let cf = select::calibrated(args)?;
    let engine = TwistEngine::new(&cf.form)?;
    let (i, sign) = parse_class(class)?;
    let primes = scan_class(&engine, i, sign, count)?;
    match format {
        Format::Json => print_json(&json!({ "class": class, "primes": primes })),
        Format::Csv => {
            println!("q");
            for q in primes {
                println!("{q}");
            }
        }
        Format::Text => {
            for q in primes {
                println!("{q}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn check_lemmas(args: &CurveArgs, max_m: u64, samples: usize, seed: u64, format: Format) -> Result<ExitCode> {
    let cf = select::calibrated(args)?;
    let engine = TwistEngine::new(&cf.form)?;
    let config = SuiteConfig {
        recursion_max: max_m,
        bounds_max: max_m,
        integrality_samples: samples,
        seed,
        ..SuiteConfig::default()
    };
    let mut report = suite::property_suite(&engine, &config)?;
    report.families.push(suite::character_sum_family(max_m.min(500))?);
    let ok = report.ok();
    match format {
        Format::Json => print_json(&serde_json::to_value(&report).expect("json")),
        _ => {
            for f in &report.families {
                println!("{}", f.summary());
            }
            for f in report.families.iter().filter(|f| f.required && !f.ok()) {
                for x in f.failures.iter().take(10) {
                    println!("counterexample [{}]: {x}", f.name);
                }
            }
            println!("{}", if ok { "all checks pass" } else { "some checks fail" });
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn oracle(args: &CurveArgs, m: u64, format: Format) -> Result<ExitCode> {
    let cf = select::calibrated(args)?;
    let chi = if m == 1 {
        QuadraticCharacter::trivial()
    } else {
        QuadraticCharacter::new(m)?
    };
    let l = cf.context.l_value_central(&chi)?;
    let c = birch_manin_check(&cf.form, &cf.context, &cf.periods, &chi)?;
    let o = json!({
        "level": cf.form.level(),
        "label": cf.report.label,
        "modulus": m,
        "l_value": to_f64(&l.value),
        "error_bound": to_f64(&l.error_bound),
        "terms": l.terms,
        "root_number": l.root_number,
        "predicted_root_number": l.predicted_root_number,
        "scaled_value": to_f64(&c.numeric),
        "exact_sum": format_rational(&c.exact),
        "residual": c.residual,
        "agrees": c.agrees,
    });
    match format {
        Format::Json => print_json(&o),
        _ => {
            println!("{} twisted by the character of conductor {m}", cf.report.label);
            println!(
                "L(1) = {:.20e} (error <= {:.1e}, {} terms, root number {:+})",
                to_f64(&l.value),
                to_f64(&l.error_bound),
                l.terms,
                l.root_number
            );
            println!(
                "sqrt(M) L(1)/Omega = {:.20e}, symbol sum = {}",
                to_f64(&c.numeric),
                format_rational(&c.exact)
            );
            println!("residual {:.2e}: {}", c.residual, if c.agrees { "agree" } else { "DISAGREE" });
        }
    }
    Ok(if c.agrees { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
