use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use subblock_bounds::asymptotics::{delta_grid, rate_table, RateFamily};
use subblock_bounds::cscc::{cscc_closed_form_t1, cscc_closed_form_t2, cscc_gsp_bound, cscc_reduced_lp, CsccInstance};
use subblock_bounds::lp::{solve_min, verify_certificate, Certificate, Verdict};
use subblock_bounds::oracle::{exhaustive_code_size_budgeted, full_lp, CodeSearch};
use subblock_bounds::secc::{
    build_certificate_table1, build_certificate_table2, secc_closed_form_m1, secc_closed_form_wl1,
    secc_gsp_bound, secc_reduced_lp, secc_reduced_lp_at_radius, SeccInstance,
};
use subblock_bounds::{Error, Family};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full programs with at most this many cells are also re-solved directly.
const SIMPLEX_CELLS: usize = 20_000;

#[derive(Parser)]
#[command(name = "subblock-bounds", version, about = "Sphere-packing bounds for subblock-constrained codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lp,
    Closed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Cscc,
    Secc,
}

impl FamilyArg {
    fn core(self) -> Family {
        match self {
            FamilyArg::Cscc => Family::Cscc,
            FamilyArg::Secc => Family::Secc,
        }
    }
}

#[derive(clap::Args, Clone, Copy)]
struct Params {
    /// Number of subblocks.
    #[arg(short = 'm')]
    m: usize,
    /// Subblock length.
    #[arg(short = 'L')]
    len: u32,
    /// Subblock weight (exact for cscc, minimum for secc).
    #[arg(short = 'w')]
    w: u32,
    /// Minimum distance.
    #[arg(short = 'd')]
    d: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound for constant subblock-composition codes.
    CsccBound {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "lp")]
        method: Method,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Upper bound for subblock energy-constrained codes.
    SeccBound {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "lp")]
        method: Method,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Checks a tabulated optimality certificate for radius one.
    /// Table 1 takes -m and -L (weight L-1); table 2 takes -L and -w (one subblock).
    Certify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(short = 'm')]
        m: Option<usize>,
        #[arg(short = 'L')]
        len: u32,
        #[arg(short = 'w')]
        w: Option<u32>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Compares the reduced program with the full program and exhaustive search.
    OracleCompare {
        #[arg(value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: Params,
        /// Node budget for the clique search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Asymptotic rate bounds over a grid of relative distances.
    RateTable {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(short = 'L')]
        len: u32,
        /// Comma-separated weights.
        #[arg(short = 'w', value_delimiter = ',', required = true)]
        w: Vec<u32>,
        /// Grid as start:stop:step.
        #[arg(long)]
        delta: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::CapExceeded { .. } => 2,
            Error::OutsideDomain(_) => 3,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type Run = Result<(String, u8), Failure>;

/// `p/q`, or `p` for integers.
fn exact(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Truncates toward zero at `places` decimals.
fn decimal(q: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = q.abs() * BigRational::from_integer(scale.clone());
    let truncated = scaled.floor().to_integer();
    let (int, frac) = truncated.div_rem(&scale);
    let sign = if q.is_negative() && !truncated.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>places$}", frac.to_string())
}

/// Short decimal with trailing zeros trimmed.
fn approx(q: &BigRational) -> String {
    let s = decimal(q, 3);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn plain_value(q: &BigRational) -> String {
    if q.is_integer() {
        exact(q)
    } else {
        format!("{} (≈{})", exact(q), approx(q))
    }
}

fn value_json(q: &BigRational) -> Value {
    json!({ "exact": exact(q), "decimal": decimal(q, 9) })
}

fn envelope(command: &str, params: Value, result: Value) -> String {
    let doc = json!({
        "tool": "subblock-bounds",
        "version": VERSION,
        "command": command,
        "params": params,
        "result": result,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn params_json(p: &Params) -> Value {
    json!({ "m": p.m, "L": p.len, "w": p.w, "d": p.d, "t": (p.d.max(1) - 1) / 2 })
}

/// Named bound values in the requested format.
fn emit_values(command: &str, params: Value, values: &[(&str, BigRational)], agree: Option<bool>, format: Format) -> String {
    match format {
        Format::Plain => {
            let mut out = if values.len() == 1 {
                format!("{}\n", plain_value(&values[0].1))
            } else {
                values.iter().map(|(k, v)| format!("{k}: {}\n", plain_value(v))).collect()
            };
            if let Some(a) = agree {
                out.push_str(if a { "agree: yes\n" } else { "agree: no\n" });
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("method,exact,decimal\n");
            for (k, v) in values {
                out.push_str(&format!("{k},{},{}\n", exact(v), decimal(v, 9)));
            }
            out
        }
        Format::Json => {
            let mut result = Map::new();
            for (k, v) in values {
                result.insert((*k).to_string(), value_json(v));
            }
            if let Some(a) = agree {
                result.insert("agree".into(), json!(a));
            }
            envelope(command, params, Value::Object(result))
        }
    }
}

fn bound_values(
    method: Method,
    lp: impl FnOnce() -> Result<BigRational, Error>,
    closed: impl FnOnce() -> Result<BigRational, Error>,
) -> Result<(Vec<(&'static str, BigRational)>, Option<bool>), Failure> {
    Ok(match method {
        Method::Lp => (vec![("lp", lp()?)], None),
        Method::Closed => (vec![("closed", closed()?)], None),
        Method::Both => {
            let c = closed()?;
            let l = lp()?;
            let agree = l == c;
            (vec![("lp", l), ("closed", c)], Some(agree))
        }
    })
}

fn cscc_bound(p: Params, method: Method, format: Format) -> Run {
    let inst = CsccInstance::new(p.m, p.len, p.w, p.d)?;
    let (values, agree) = bound_values(
        method,
        || cscc_gsp_bound(&inst),
        || match inst.t() {
            1 => cscc_closed_form_t1(p.m, p.len, p.w),
            2 => cscc_closed_form_t2(p.m, p.len, p.w),
            t => Err(Error::OutsideDomain(format!("no closed form at radius {t}"))),
        },
    )?;
    Ok((emit_values("cscc-bound", params_json(&p), &values, agree, format), 0))
}

fn secc_bound(p: Params, method: Method, format: Format) -> Run {
    let inst = SeccInstance::new(p.m, p.len, p.w, p.d)?;
    let (values, agree) = bound_values(
        method,
        || secc_gsp_bound(&inst),
        || match inst.t() {
            1 if p.w + 1 == p.len => secc_closed_form_wl1(p.m, p.len),
            1 if p.m == 1 => secc_closed_form_m1(p.len, p.w),
            1 => Err(Error::OutsideDomain("radius-one closed forms need w = L-1 or m = 1".into())),
            t => Err(Error::OutsideDomain(format!("no closed form at radius {t}"))),
        },
    )?;
    Ok((emit_values("secc-bound", params_json(&p), &values, agree, format), 0))
}

fn certify(table: u8, m: Option<usize>, len: u32, w: Option<u32>, format: Format) -> Run {
    // Parameters outside a table's family are usage errors here.
    let usage = |e: Error| match e {
        Error::OutsideDomain(msg) => Failure::new(2, format!("parameters outside table {table}: {msg}")),
        other => other.into(),
    };
    let (lp, cert, params): (_, Certificate, Value) = match table {
        1 => {
            let m = m.ok_or_else(|| Failure::new(2, "table 1 needs -m"))?;
            let cert = build_certificate_table1(m, len).map_err(usage)?;
            let lp = secc_reduced_lp_at_radius(m, len, len - 1, 1)?;
            (lp, cert, json!({ "table": 1, "m": m, "L": len, "w": len - 1, "t": 1 }))
        }
        _ => {
            let w = w.ok_or_else(|| Failure::new(2, "table 2 needs -w"))?;
            if m.is_some_and(|m| m != 1) {
                return Err(Failure::new(2, "table 2 is for a single subblock"));
            }
            let cert = build_certificate_table2(len, w).map_err(usage)?;
            let lp = secc_reduced_lp_at_radius(1, len, w, 1)?;
            (lp, cert, json!({ "table": 2, "m": 1, "L": len, "w": w, "t": 1 }))
        }
    };
    let verdict = verify_certificate(&lp, &cert)?;
    let primal = cert.primal_value(&lp);
    let dual = cert.dual_value();
    let code = if verdict.is_valid() { 0 } else { 4 };
    let out = match format {
        Format::Plain => format!(
            "verdict: {}\nprimal: {}\ndual: {}\n",
            verdict.label(),
            plain_value(&primal),
            plain_value(&dual)
        ),
        Format::Csv => format!(
            "verdict,primal,dual\n{},{},{}\n",
            verdict.label(),
            exact(&primal),
            exact(&dual)
        ),
        Format::Json => envelope(
            "certify",
            params,
            json!({ "verdict": verdict.label(), "primal": value_json(&primal), "dual": value_json(&dual) }),
        ),
    };
    Ok((out, code))
}

fn oracle_compare(family: Family, p: Params, budget: u64, format: Format) -> Run {
    let t = (p.d.max(1) - 1) / 2;
    let lp = match family {
        Family::Cscc => cscc_reduced_lp(&CsccInstance::new(p.m, p.len, p.w, p.d)?)?,
        Family::Secc => secc_reduced_lp(&SeccInstance::new(p.m, p.len, p.w, p.d)?)?,
    };
    let reduced = solve_min(&lp)?;
    let full = full_lp(family, p.m, p.len, p.w, t as u32)?;
    let (y, x) = full.lift(&lp, &reduced);
    let lifted = full.verify(&y, &x)?;
    let direct = if full.rows.len() * full.cols.len() <= SIMPLEX_CELLS {
        Some(full.solve()?.value)
    } else {
        None
    };
    let full_value = match (&lifted, &direct) {
        (_, Some(v)) => Some(v.clone()),
        (Verdict::Valid { value }, None) => Some(value.clone()),
        _ => None,
    };
    let equal = full_value.as_ref() == Some(&reduced.value) && lifted.is_valid();
    let search = exhaustive_code_size_budgeted(family, p.m, p.len, p.w, p.d, budget)?;
    let (code, finished) = match search {
        CodeSearch::Done(n) => (n, true),
        CodeSearch::Unfinished(n) => (n, false),
    };
    let within = BigRational::from_integer(code.into()) <= reduced.value;
    let validity = match (within, finished) {
        (false, _) => "fail",
        (true, true) => "pass",
        (true, false) => "unresolved",
    };
    let equality = if equal { "pass" } else { "fail" };
    let exit = if equal && within { 0 } else { 5 };
    let code_text = if finished { code.to_string() } else { format!(">={code}") };
    let out = match format {
        Format::Plain => format!(
            "reduced: {}\nfull: {}\ncode: {code_text}\nreduction-equality: {equality}\nbound-validity: {validity}\n",
            plain_value(&reduced.value),
            full_value.as_ref().map_or("unavailable".into(), plain_value),
        ),
        Format::Csv => format!(
            "reduced,full,code,reduction_equality,bound_validity\n{},{},{code_text},{equality},{validity}\n",
            exact(&reduced.value),
            full_value.as_ref().map_or("NA".into(), exact),
        ),
        Format::Json => {
            let mut params = params_json(&p);
            params["family"] = json!(family.name());
            envelope(
                "oracle-compare",
                params,
                json!({
                    "reduced": value_json(&reduced.value),
                    "full": full_value.as_ref().map_or(Value::Null, value_json),
                    "full_resolved_by": if direct.is_some() { "simplex" } else { "lifted-certificate" },
                    "code_size": code,
                    "code_search_finished": finished,
                    "reduction_equality": equality,
                    "bound_validity": validity,
                }),
            )
        }
    };
    Ok((out, exit))
}

fn parse_range(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::new(2, format!("malformed range {s:?}, expected start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    Ok((nums[0], nums[1], nums[2]))
}

fn rate_rows(family: RateFamily, len: u32, ws: &[u32], deltas: &[f64]) -> Vec<(u32, f64, Vec<Option<f64>>)> {
    ws.iter()
        .flat_map(|&w| {
            rate_table(family, len, w, deltas)
                .into_iter()
                .map(move |r| (w, r.delta(), r.values()))
        })
        .collect()
}

fn rate_table_cmd(family: FamilyArg, len: u32, ws: Vec<u32>, delta: &str, format: Format) -> Run {
    let (start, stop, step) = parse_range(delta)?;
    let deltas = delta_grid(start, stop, step)?;
    if len == 0 || ws.iter().any(|&w| w > len) {
        return Err(Failure::new(2, "need L >= 1 and every w <= L"));
    }
    let family = match family {
        FamilyArg::Cscc => RateFamily::Cscc,
        FamilyArg::Secc => RateFamily::Secc,
    };
    let out = match format {
        Format::Csv => subblock_bounds::asymptotics::rate_table_csv(family, len, &ws, &deltas),
        Format::Plain => {
            let mut out = format!("w {}\n", family.columns().join(" "));
            for (w, d, vals) in rate_rows(family, len, &ws, &deltas) {
                out.push_str(&format!("{w} {d:.6}"));
                for v in vals {
                    out.push_str(&v.map_or(" NA".into(), |x| format!(" {x:.9}")));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rate_rows(family, len, &ws, &deltas)
                .into_iter()
                .map(|(w, d, vals)| {
                    let mut row = vec![json!(w), json!(format!("{d:.6}"))];
                    row.extend(vals.into_iter().map(|v| v.map_or(Value::Null, |x| json!(format!("{x:.9}")))));
                    Value::Array(row)
                })
                .collect();
            let mut columns = vec!["w"];
            columns.extend(family.columns());
            envelope(
                "rate-table",
                json!({ "family": if family == RateFamily::Cscc { "cscc" } else { "secc" }, "L": len, "w": ws, "delta": delta }),
                json!({ "columns": columns, "rows": rows }),
            )
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::CsccBound { params, method, format } => cscc_bound(params, method, format),
        Command::SeccBound { params, method, format } => secc_bound(params, method, format),
        Command::Certify { table, m, len, w, format } => certify(table, m, len, w, format),
        Command::OracleCompare {
            family,
            params,
            budget,
            format,
        } => oracle_compare(family.core(), params, budget, format),
        Command::RateTable {
            family,
            len,
            w,
            delta,
            format,
        } => rate_table_cmd(family, len, w, &delta, format),
    };
    match run {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
