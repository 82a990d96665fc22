//! Data-producing subcommands: everything except `verify`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};
use wonderful::autgroup::{self, AutError};
use wonderful::chow::{self, ChowGroup, SurfaceClass};
use wonderful::counting as ct;
use wonderful::valfan;
use wonderful::{linalg, Ambient, Field, FieldEmbedding, FlagType, Lattice, Subspace};

use crate::config::{AutAction, ChowOp, Command, Format, RunConfig, Table};
use crate::suites::{omega_formula, VERIFY_CHART_POINTS};
use crate::{CliError, Output};

/// Ordered pairs of flags beyond which `fan certify` refuses to list them.
pub const CERTIFY_PAIR_LIMIT: u64 = 500_000;

fn data(body: String, pass: bool) -> Output {
    Output {
        body,
        footer: None,
        pass,
        budget_exhausted: false,
    }
}

fn to_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// CSV and text projections of a flat JSON object.
fn render_object(obj: &Value, format: Format) -> String {
    let Value::Object(map) = obj else {
        return to_line(obj);
    };
    match format {
        Format::Json => to_line(obj),
        Format::Csv => {
            let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
            rows.extend(map.iter().map(|(k, v)| vec![k.clone(), cell(v)]));
            write_csv(rows)
        }
        Format::Text => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, v)| format!("{k:<width$}  {}\n", cell(v)))
                .collect()
        }
    }
}

fn ambient(config: &RunConfig) -> Result<Ambient, CliError> {
    Ok(Ambient::new(config.n, Field::with_order(config.q)?)?)
}

fn lattice(config: &RunConfig) -> Result<Arc<Lattice>, CliError> {
    Ok(Arc::new(Lattice::new(&ambient(config)?)?))
}

pub fn run_command(config: &RunConfig, stdin: &str) -> Result<Output, CliError> {
    match &config.command {
        Command::Count { table } => Ok(count(config, *table)),
        Command::Enumerate { dim } => enumerate(config, *dim),
        Command::Flags { complete } => flags(config, *complete),
        Command::Chow { op } => chow_cmd(config, *op),
        Command::Fan { .. } => fan(config),
        Command::Chart { .. } => chart(config),
        Command::Aut { action } => match action {
            AutAction::Search => aut_search(config),
            AutAction::Realize => aut_realize(config, stdin),
        },
        Command::Verify { .. } => unreachable!("handled by run"),
    }
}

fn num(x: &num_bigint::BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// Table name, column headers, rows.
type CountTable = (&'static str, Vec<&'static str>, Vec<Vec<Value>>);

fn count_tables(n: u64, q: u64) -> Vec<CountTable> {
    let lambda = (0..=n)
        .map(|t| vec![json!(t), num(&ct::lambda(t, q))])
        .collect();
    let nu = (2..=n.max(2))
        .map(|t| {
            vec![
                json!(t),
                num(&ct::nu(t, q)),
                num(&ct::nu_from_recursion(t, q)),
            ]
        })
        .collect();
    let rank = (0..n)
        .map(|d| vec![json!(d), num(&ct::rank_ch1_exceptional(d, n, q))])
        .collect();
    vec![
        ("lambda", vec!["t", "lambda"], lambda),
        ("nu", vec!["t", "nu", "nu_recursion"], nu),
        ("rank", vec!["d", "rank"], rank),
    ]
}

fn count(config: &RunConfig, table: Option<Table>) -> Output {
    let (n, q) = (config.n as u64, config.q);
    let wanted = |name: &str| match table {
        None => true,
        Some(Table::Lambda) => name == "lambda",
        Some(Table::Nu) => name == "nu",
        Some(Table::Rank) => name == "rank",
    };
    let tables: Vec<_> = count_tables(n, q)
        .into_iter()
        .filter(|t| wanted(t.0))
        .collect();
    let report = ct::check_inequalities(n, q);
    let body = match config.format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("q".into(), json!(q));
            obj.insert("n".into(), json!(n));
            for (name, cols, rows) in &tables {
                let objs: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            cols.iter()
                                .map(|c| c.to_string())
                                .zip(r.iter().cloned())
                                .collect(),
                        )
                    })
                    .collect();
                obj.insert((*name).into(), Value::Array(objs));
            }
            if table.is_none() {
                obj.insert(
                    "inequalities".into(),
                    serde_json::to_value(&report).expect("serializable"),
                );
            }
            to_line(&Value::Object(obj))
        }
        Format::Csv => {
            let mut rows = vec![vec!["table".into(), "key".into(), "value".into()]];
            for (name, _, data) in &tables {
                for r in data {
                    let rest: Vec<String> = r[1..].iter().map(cell).collect();
                    rows.push(vec![name.to_string(), cell(&r[0]), rest.join(" ")]);
                }
            }
            write_csv(rows)
        }
        Format::Text => {
            let mut out = String::new();
            for (name, cols, data) in &tables {
                let cells: Vec<Vec<String>> =
                    data.iter().map(|r| r.iter().map(cell).collect()).collect();
                let widths: Vec<usize> = (0..cols.len())
                    .map(|i| {
                        cells
                            .iter()
                            .map(|r| r[i].len())
                            .chain([cols[i].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                out.push_str(&format!("{name} (q = {q}, n = {n})\n"));
                let header: Vec<String> = cols
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                out.push_str(&header.join("  "));
                out.push('\n');
                for r in &cells {
                    let line: Vec<String> = r
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    out.push_str(&line.join("  "));
                    out.push('\n');
                }
                out.push('\n');
            }
            if table.is_none() {
                for r in &report.records {
                    out.push_str(&format!(
                        "{} {:?}: {} > {} {}\n",
                        r.name,
                        r.params,
                        r.lhs,
                        r.rhs,
                        if r.holds { "holds" } else { "FAILS" }
                    ));
                }
            }
            out
        }
    };
    data(body, table.is_some() || report.pass)
}

fn subspace_row(s: &Subspace) -> Vec<String> {
    let mut row = vec![s.dim().to_string()];
    row.extend(s.forms().iter().flatten().map(u32::to_string));
    row
}

fn enumerate(config: &RunConfig, dim: usize) -> Result<Output, CliError> {
    let amb = ambient(config)?;
    let subs = wonderful::projspace::enumerate_subspaces(&amb, dim)?;
    let body = match config.format {
        Format::Json => to_line(&subs),
        Format::Csv => {
            let width = amb.width() * (config.n - dim);
            let mut header = vec!["dim".to_string()];
            header.extend((0..width).map(|i| format!("a{}_{}", i / amb.width(), i % amb.width())));
            let mut rows = vec![header];
            rows.extend(subs.iter().map(subspace_row));
            write_csv(rows)
        }
        Format::Text => subs
            .iter()
            .map(|s| format!("{} {:?}\n", s.dim(), s.forms()))
            .collect(),
    };
    Ok(data(body, true))
}

fn flags(config: &RunConfig, complete: bool) -> Result<Output, CliError> {
    let lat = lattice(config)?;
    let kind = if complete {
        FlagType::Complete
    } else {
        FlagType::All
    };
    let fs = lat.enumerate_flags(&kind)?;
    let body = match config.format {
        Format::Json => to_line(&fs),
        Format::Csv => {
            let mut rows = vec![vec![
                "flag".to_string(),
                "dim".to_string(),
                "rref".to_string(),
            ]];
            for (i, f) in fs.iter().enumerate() {
                for m in f.members() {
                    let mut r = vec![i.to_string()];
                    r.extend(subspace_row(m));
                    rows.push(r);
                }
            }
            write_csv(rows)
        }
        Format::Text => fs
            .iter()
            .map(|f| {
                let parts: Vec<String> = f
                    .members()
                    .iter()
                    .map(|m| format!("{:?}", m.forms()))
                    .collect();
                parts.join(" < ") + "\n"
            })
            .collect(),
    };
    Ok(data(body, true))
}

fn chow_cmd(config: &RunConfig, op: ChowOp) -> Result<Output, CliError> {
    let (n, q) = (config.n as u64, config.q);
    match op {
        ChowOp::Canonical => {
            if config.n < 2 {
                return Err(CliError::Config("the blow-up is trivial for n = 1".into()));
            }
            let lat = lattice(config)?;
            let chow = ChowGroup::new(&lat);
            let obj = json!({
                "n": n,
                "q": q,
                "rank": chow.rank(),
                "canonical_class": chow.canonical_class(),
            });
            Ok(data(render_object(&obj, config.format), true))
        }
        ChowOp::SwapCheck => {
            let r = chow::swap_impossibility(n, q)?;
            let pass = !r.applicable || r.ruled_out();
            let mut obj = serde_json::to_value(&r).expect("serializable");
            obj["ruled_out"] = json!(r.ruled_out());
            Ok(data(render_object(&obj, config.format), pass))
        }
        ChowOp::Surface => {
            if config.n != 2 {
                return Err(CliError::Config(format!(
                    "the intersection pairing needs n = 2, got n = {}",
                    config.n
                )));
            }
            let lat = lattice(config)?;
            let chow = ChowGroup::new(&lat);
            let pts = lat.points();
            let lines = lat.hyperplanes();
            let class = |s: &Subspace| -> Result<SurfaceClass, CliError> {
                Ok(SurfaceClass::try_from(chow.divisor(s)?)?)
            };
            let (p, other) = (&pts[0], &pts[1]);
            let on = lines
                .iter()
                .find(|l| p.is_contained_in(l).unwrap_or(false))
                .expect("incidence");
            let off = lines
                .iter()
                .find(|l| !p.is_contained_in(l).unwrap_or(true))
                .expect("incidence");
            let second = lines.iter().find(|l| *l != on).expect("several lines");
            let dot = |a: &Subspace, b: &Subspace| -> Result<i64, CliError> {
                Ok(chow::surface_intersection(&class(a)?, &class(b)?)?)
            };
            let obj = json!({
                "n": 2,
                "q": q,
                "point_self_intersection": dot(p, p)?,
                "line_self_intersection": dot(on, on)?,
                "point_line_incident": dot(p, on)?,
                "point_line_disjoint": dot(p, off)?,
                "distinct_points": dot(p, other)?,
                "distinct_lines": dot(on, second)?,
                "h_squared": chow::surface_intersection(
                    &SurfaceClass::try_from(chow.h())?,
                    &SurfaceClass::try_from(chow.h())?,
                )?,
            });
            let pass = obj["point_self_intersection"] == json!(-1)
                && obj["line_self_intersection"] == json!(-(q as i64));
            Ok(data(render_object(&obj, config.format), pass))
        }
    }
}

fn fan(config: &RunConfig) -> Result<Output, CliError> {
    let lat = lattice(config)?;
    let fs = lat.enumerate_flags(&FlagType::All)?;
    let m = fs.len() as u64;
    let pairs = m * m.saturating_sub(1);
    if pairs > CERTIFY_PAIR_LIMIT {
        return Err(CliError::Budget(format!(
            "{pairs} ordered flag pairs exceed the listing limit of {CERTIFY_PAIR_LIMIT}"
        )));
    }
    use rayon::prelude::*;
    let records: Vec<valfan::CertificateRecord> = (0..fs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (lat, fs) = (&lat, &fs);
            (0..fs.len())
                .filter(move |&j| j != i)
                .map(move |j| valfan::certificate_record(lat, &fs[i], &fs[j]))
        })
        .collect::<Result<_, _>>()?;
    let pass = records.iter().all(|r| r.pass);
    let body = match config.format {
        Format::Json => to_line(&records),
        Format::Csv | Format::Text => {
            let mut rows = vec![vec![
                "flagA".to_string(),
                "flagB".to_string(),
                "v".to_string(),
                "v'".to_string(),
                "pass".to_string(),
            ]];
            for r in &records {
                rows.push(vec![
                    serde_json::to_string(&r.flag_a).expect("serializable"),
                    serde_json::to_string(&r.flag_b).expect("serializable"),
                    format!("{:?}", r.v.coefficients()),
                    format!("{:?}", r.v_prime.coefficients()),
                    r.pass.to_string(),
                ]);
            }
            if config.format == Format::Csv {
                write_csv(rows)
            } else {
                rows.iter().map(|r| r.join("  ") + "\n").collect()
            }
        }
    };
    Ok(data(body, pass))
}

fn chart(config: &RunConfig) -> Result<Output, CliError> {
    let amb = ambient(config)?;
    let field = amb.field();
    if !field.is_prime_field() {
        return Err(CliError::Config(
            "chart tests need a prime base field".into(),
        ));
    }
    let big_field = Field::new(u64::from(field.characteristic()), config.ext)?;
    let big_q = u64::from(big_field.order());
    if big_q
        .checked_pow(config.n as u32)
        .is_none_or(|t| t > VERIFY_CHART_POINTS)
    {
        return Err(CliError::Budget(format!(
            "GF({big_q})^{} has more than {VERIFY_CHART_POINTS} points",
            config.n
        )));
    }
    let emb = FieldEmbedding::new(field, &big_field)?;
    let w = amb.width();
    let basis: Vec<Vec<u32>> = (0..w)
        .map(|i| (0..w).map(|j| u32::from(i == j)).collect())
        .collect();
    let cp = valfan::chart_polynomial(&amb, &basis)?;
    let sweep = valfan::chart_sweep(&cp, &emb)?;
    let expected = omega_formula(config.n as u64, config.q, big_q);
    let pass = sweep.pass() && expected == sweep.omega_count.into();
    let obj = json!({
        "q": config.q,
        "n": config.n,
        "ext": config.ext,
        "factors": cp.factors().len(),
        "points": sweep.points,
        "chart_count": sweep.chart_count,
        "omega_count": sweep.omega_count,
        "omega_formula": expected.to_string(),
        "mismatches": sweep.mismatches,
    });
    Ok(data(render_object(&obj, config.format), pass))
}

fn aut_search(config: &RunConfig) -> Result<Output, CliError> {
    let lat = lattice(config)?;
    let found = match autgroup::collineation_search(&lat, config.budget) {
        Ok(f) => f,
        Err(AutError::BudgetExceeded { count, limit }) => {
            return Err(CliError::Budget(format!(
                "collineation search stopped after {count} nodes (limit {limit})"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let field = lat.ambient().field();
    let pgl = ct::pgl_order(config.n as u64, config.q);
    let expected = &pgl * u64::from(field.degree());
    let pass = num_bigint::BigUint::from(found.len()) == expected;
    let images: Vec<Vec<usize>> = found.iter().map(|g| g.point_images()).collect();
    let obj = json!({
        "q": config.q,
        "n": config.n,
        "count": found.len(),
        "pgl_order": num(&pgl),
        "expected": num(&expected),
        "points": lat.points().iter().map(|p| p.point_coords()).collect::<Vec<_>>(),
        "point_images": images,
    });
    Ok(data(render_object(&obj, config.format), pass))
}

/// Parses `[[from, to], ...]` with coordinate vectors over GF(q) codes.
fn parse_point_map(lat: &Lattice, stdin: &str) -> Result<Vec<usize>, CliError> {
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = serde_json::from_str(stdin)
        .map_err(|e| CliError::Config(format!("expected [[from, to], ...]: {e}")))?;
    let amb = lat.ambient();
    let index = |x: &[u32]| -> Result<usize, CliError> {
        let v = linalg::normalize(amb.field(), x);
        let p = Subspace::point(amb, &v)
            .map_err(|e| CliError::Config(format!("bad point {x:?}: {e}")))?;
        lat.index_of(&p)
            .ok_or_else(|| CliError::Config(format!("bad point {x:?}")))
    };
    let npts = lat.points().len();
    let mut sigma = vec![usize::MAX; npts];
    for (from, to) in &pairs {
        let (i, j) = (index(from)?, index(to)?);
        if sigma[i] != usize::MAX {
            return Err(CliError::Config(format!("point {from:?} given twice")));
        }
        sigma[i] = j;
    }
    if sigma.contains(&usize::MAX) {
        return Err(CliError::Config(format!(
            "the map must list all {npts} points"
        )));
    }
    Ok(sigma)
}

fn aut_realize(config: &RunConfig, stdin: &str) -> Result<Output, CliError> {
    let lat = lattice(config)?;
    let sigma = parse_point_map(&lat, stdin)?;
    let (obj, pass) = match autgroup::realize_as_pgl(&lat, &sigma) {
        Ok(g) => (json!({"matrix": g}), true),
        Err(
            e @ (AutError::NotBijective
            | AutError::NotCollinearityPreserving
            | AutError::NotRealizable),
        ) => (
            json!({"error": format!("{e:?}"), "message": e.to_string()}),
            false,
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(data(render_object(&obj, config.format), pass))
}
