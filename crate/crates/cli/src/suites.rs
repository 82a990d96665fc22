//! The verification suites behind `wonderful verify`.
//!
//! Each suite appends records in a fixed order. Suites that would need a
//! lattice, flag set or search beyond the built-in limits record a skip
//! with the reason instead of running.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use wonderful::autgroup::{self, AutError};
use wonderful::chow::{self, ChowGroup, SurfaceClass};
use wonderful::counting as ct;
use wonderful::valfan::{self, ConePoint};
use wonderful::{Ambient, Field, FieldEmbedding, FlagType, Lattice, SubspacePermutation};

use crate::config::RunConfig;
use crate::report::{Record, Report};
use crate::CliError;

/// Largest lattice the non-counting suites will build.
pub const VERIFY_LATTICE_LIMIT: u64 = 20_000;
/// Largest number of ordered flag pairs certified.
pub const VERIFY_PAIR_LIMIT: u64 = 2_000_000;
/// Largest number of flags whose cone spans are compared pairwise.
pub const VERIFY_SPAN_FLAGS: usize = 200;
/// Largest number of grid points in the incomparability sweep.
pub const VERIFY_GRID_POINTS: usize = 150;
/// Largest `#K^n` swept by the chart test.
pub const VERIFY_CHART_POINTS: u64 = 2_000_000;
/// Largest group order the collineation suite will enumerate.
pub const VERIFY_GROUP_LIMIT: u64 = 200_000;
/// Largest number of matrices scanned to list PGL directly.
pub const VERIFY_MATRIX_LIMIT: u64 = 1_000_000;

mod anchor {
    pub const LAMBDA_RECURSION: &str = "lambda recursion through a fixed hyperplane";
    pub const NU_CLOSED_FORM: &str = "nu: subspaces of codimension >= 2 off a fixed hyperplane";
    pub const NU_BOUND: &str = "nu(t) >= lambda(t-1)";
    pub const LAMBDA_GROWTH: &str = "lambda(t) - lambda(t-1) > lambda(t-1) + 1";
    pub const RANK_GAP: &str = "lambda(n-1-d) - lambda(n-1-d') > lambda(d') - lambda(d) + 1";
    pub const RANK_FORMULA: &str = "rk CH^1(E_L) = lambda(d) + lambda(n-1-d) + epsilon(d)";
    pub const RANK_MONOTONE: &str = "rk CH^1(E_L) > rk CH^1(E_L') for d < d' < n-1-d";
    pub const SUBSPACE_COUNT: &str = "subspaces of P^n(F_q) counted by Gaussian binomials";
    pub const DEGENERATE: &str = "P^1: nothing to blow up";
    pub const SURFACE_POINT: &str = "blown-up point on the surface: E_p^2 = -1";
    pub const SURFACE_LINE: &str = "strict transform of a rational line: E_l^2 = 1 - #l(k) = -#k";
    pub const SURFACE_INCIDENT: &str = "E_p . E_l = 1 for p on l";
    pub const CANONICAL_IDENTITY: &str = "canonical class fixed by the identity pullback";
    pub const SWAP_NUMERIC: &str =
        "(n+1)(q^n - q) != (n-1)(q^{n+1} - 1) rules out a point/hyperplane swap";
    pub const SWAP_DUALITY: &str = "duality pullback does not fix K_X modulo Gamma";
    pub const CERTIFICATES: &str = "distinct flags separated by a ratio of hyperplane equations";
    pub const CONE_RANK: &str = "cone over a flag has full dimension in the valuation space";
    pub const CONE_SPANS: &str = "distinct flags give distinct cones";
    pub const INCOMPARABLE: &str = "distinct fan points are incomparable under unit evaluation";
    pub const CHART: &str = "chart polynomial cuts out the hyperplane complement";
    pub const OMEGA_COUNT: &str = "#Omega(F_Q) = prod (Q - q^i)";
    pub const COLLINEATIONS: &str = "incidence-preserving lattice bijections are induced by PGL";
    pub const SEMILINEAR: &str = "lattice automorphisms for non-prime q form PGammaL (informative)";
    pub const REALIZE: &str = "collineations realized by matrices from a projective frame";
    pub const FROBENIUS: &str = "Frobenius twist preserves incidence but is not projective-linear";
    pub const CANONICAL_FIXED: &str = "K_X is fixed by pullback along every collineation";
}

fn big(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn bigi(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join("_")
}

/// Counting identities and inequalities; pure integer arithmetic.
pub fn counting_suite(n: u64, q: u64) -> Vec<Record> {
    let mut out = Vec::new();
    for t in 2..=n.max(2) {
        let inputs = json!({"t": t, "q": q});
        let rec = ct::nu(t, q) + ct::lambda(t - 1, q) + ct::projective_points(t - 1, q);
        out.push(Record::exact(
            format!("lambda_recursion_t{t}"),
            anchor::LAMBDA_RECURSION,
            inputs.clone(),
            big(&ct::lambda(t, q)),
            big(&rec),
        ));
        out.push(Record::exact(
            format!("nu_closed_form_t{t}"),
            anchor::NU_CLOSED_FORM,
            inputs.clone(),
            big(&ct::nu_from_recursion(t, q)),
            big(&ct::nu(t, q)),
        ));
        out.push(Record::exact(
            format!("nu_bound_t{t}"),
            anchor::NU_BOUND,
            json!({"t": t, "q": q, "nu": big(&ct::nu(t, q)), "lambda": big(&ct::lambda(t - 1, q))}),
            json!(true),
            json!(ct::nu(t, q) >= ct::lambda(t - 1, q)),
        ));
    }
    for r in ct::check_inequalities(n, q).records {
        let a = if r.name == "lambda_growth" {
            anchor::LAMBDA_GROWTH
        } else {
            anchor::RANK_GAP
        };
        out.push(Record::exact(
            format!("{}_{}", r.name, join(&r.params)),
            a,
            json!({"params": r.params, "lhs": bigi(&r.lhs), "rhs": bigi(&r.rhs)}),
            json!(true),
            json!(r.holds),
        ));
    }
    for d in 0..n {
        let expected =
            ct::lambda(d, q) + ct::lambda(n - 1 - d, q) + BigUint::from(ct::epsilon(d, n));
        out.push(Record::exact(
            format!("rank_ch1_d{d}"),
            anchor::RANK_FORMULA,
            json!({"d": d, "n": n, "q": q}),
            big(&expected),
            big(&ct::rank_ch1_exceptional(d, n, q)),
        ));
    }
    for (d, dp) in ct::admissible_pairs(n) {
        let (a, b) = (
            ct::rank_ch1_exceptional(d, n, q),
            ct::rank_ch1_exceptional(dp, n, q),
        );
        out.push(Record::exact(
            format!("rank_monotone_{d}_{dp}"),
            anchor::RANK_MONOTONE,
            json!({"d": d, "d'": dp, "rank_d": big(&a), "rank_d'": big(&b)}),
            json!(true),
            json!(a > b),
        ));
    }
    out
}

fn lattice_size(n: u64, q: u64) -> BigUint {
    (0..n).map(|d| ct::gaussian_count(n, d, q)).sum()
}

fn enumeration_suite(lat: &Lattice, n: u64, q: u64) -> Vec<Record> {
    let mut out = Vec::new();
    for d in 0..n {
        out.push(Record::exact(
            format!("subspace_count_d{d}"),
            anchor::SUBSPACE_COUNT,
            json!({"n": n, "d": d, "q": q}),
            big(&ct::gaussian_count(n, d, q)),
            json!(lat.of_dim(d as usize).len()),
        ));
    }
    if n >= 2 {
        let small: usize = (0..n - 1).map(|d| lat.of_dim(d as usize).len()).sum();
        out.push(Record::exact(
            "lambda_by_enumeration",
            anchor::SUBSPACE_COUNT,
            json!({"t": n, "q": q}),
            big(&ct::lambda(n, q)),
            json!(small),
        ));
    }
    out
}

fn chow_suite(lat: &Arc<Lattice>, n: u64, q: u64) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    let chow = ChowGroup::new(lat);
    let k = chow.canonical_class();
    let h_ref = lat.hyperplanes()[0].clone();
    let id = SubspacePermutation::identity(lat);
    out.push(Record::exact(
        "canonical_fixed_by_identity",
        anchor::CANONICAL_IDENTITY,
        json!({"n": n, "q": q}),
        json!(true),
        json!(chow.pullback(&id, &k, &h_ref)? == k),
    ));
    if n == 2 {
        let p = &lat.points()[0];
        let line = lat
            .hyperplanes()
            .iter()
            .find(|l| p.is_contained_in(l).unwrap_or(false))
            .expect("every point lies on a line");
        let ep = SurfaceClass::try_from(chow.divisor(p)?)?;
        let el = SurfaceClass::try_from(chow.divisor(line)?)?;
        out.push(Record::exact(
            "E_p_self_intersection",
            anchor::SURFACE_POINT,
            json!({"q": q, "point": p}),
            json!(-1),
            json!(chow::surface_intersection(&ep, &ep)?),
        ));
        out.push(Record::exact(
            "E_ell_self_intersection",
            anchor::SURFACE_LINE,
            json!({"q": q, "line": line}),
            json!(-(q as i64)),
            json!(chow::surface_intersection(&el, &el)?),
        ));
        out.push(Record::exact(
            "E_p_E_ell_incident",
            anchor::SURFACE_INCIDENT,
            json!({"q": q, "point": p, "line": line}),
            json!(1),
            json!(chow::surface_intersection(&ep, &el)?),
        ));
    }
    let swap = chow::swap_impossibility(n, q)?;
    out.push(Record::exact(
        "swap_numeric_identity_fails",
        anchor::SWAP_NUMERIC,
        json!({"n": n, "q": q, "lhs": bigi(&swap.lhs), "rhs": bigi(&swap.rhs)}),
        json!(false),
        json!(swap.identity_holds),
    ));
    match (&swap.duality, &swap.duality_skipped) {
        (Some(d), _) => {
            out.push(Record::exact(
                "duality_moves_canonical_class",
                anchor::SWAP_DUALITY,
                json!({
                    "n": n,
                    "q": q,
                    "canonical_mod_gamma": d.canonical_mod_gamma,
                    "pullback_mod_gamma": d.pullback_mod_gamma,
                }),
                json!(true),
                json!(d.mismatch),
            ));
            out.push(Record::exact(
                "duality_pullback_mod_gamma",
                anchor::SWAP_DUALITY,
                json!({"n": n, "q": q}),
                json!(d.predicted_mod_gamma),
                json!(d.pullback_mod_gamma),
            ));
        }
        (None, reason) => out.push(Record::skipped(
            "duality_moves_canonical_class",
            anchor::SWAP_DUALITY,
            json!({"n": n, "q": q}),
            reason.clone().unwrap_or_default(),
        )),
    }
    Ok(out)
}

/// Points with weights in {1/2, 1/3} on every member, over every flag.
fn grid_points(lat: &Lattice) -> Result<Vec<ConePoint>, CliError> {
    let mut pts = Vec::new();
    for f in lat.enumerate_flags(&FlagType::All)? {
        let k = f.len();
        for mask in 0..(1u32 << k) {
            let ratios: Vec<(i64, i64)> = (0..k)
                .map(|i| if mask >> i & 1 == 0 { (1, 2) } else { (1, 3) })
                .collect();
            pts.push(ConePoint::from_ratios(f.clone(), &ratios)?);
        }
    }
    Ok(pts)
}

fn grid_size(lat: &Lattice) -> Result<usize, CliError> {
    Ok(lat
        .enumerate_flags(&FlagType::All)?
        .iter()
        .map(|f| 1usize << f.len())
        .sum())
}

/// Number of ordered pairs of distinct grid points lacking a witness pair.
pub fn incomparability_failures(lat: &Lattice, pts: &[ConePoint]) -> usize {
    use rayon::prelude::*;
    (0..pts.len())
        .into_par_iter()
        .map(|i| {
            (0..pts.len())
                .filter(|&j| j != i)
                .filter(|&j| {
                    let Ok((f, g)) = valfan::incomparable(lat, &pts[i], &pts[j]) else {
                        return true;
                    };
                    let ev = |x: &ConePoint, u| valfan::eval_cone(x, u).ok();
                    let f_ok = ev(&pts[i], &f) < ev(&pts[j], &f);
                    let g_ok = ev(&pts[i], &g) > ev(&pts[j], &g);
                    !(f_ok && g_ok)
                })
                .count()
        })
        .sum()
}

fn fan_suite(lat: &Arc<Lattice>, n: u64, q: u64) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    let flags = lat.enumerate_flags(&FlagType::All)?;
    let m = flags.len();
    let inputs = json!({"n": n, "q": q, "flags": m});
    if (m as u64) * (m as u64).saturating_sub(1) <= VERIFY_PAIR_LIMIT {
        let s = valfan::certify_all(lat)?;
        out.push(Record::exact(
            "separation_certificates",
            anchor::CERTIFICATES,
            json!({"n": n, "q": q, "flags": s.flags, "pairs": s.pairs}),
            json!(0),
            json!(s.failures.len()),
        ));
    } else {
        out.push(Record::skipped(
            "separation_certificates",
            anchor::CERTIFICATES,
            inputs.clone(),
            format!("more than {VERIFY_PAIR_LIMIT} ordered flag pairs"),
        ));
    }
    let matrices: Vec<Vec<Vec<i64>>> = flags.iter().map(valfan::cone_matrix).collect();
    let full = flags
        .iter()
        .zip(&matrices)
        .filter(|(f, mat)| valfan::column_rank(mat) == f.len())
        .count();
    out.push(Record::exact(
        "cone_matrix_full_rank",
        anchor::CONE_RANK,
        inputs.clone(),
        json!(m),
        json!(full),
    ));
    if m <= VERIFY_SPAN_FLAGS {
        let mut equal = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                if valfan::same_column_span(&matrices[i], &matrices[j]) {
                    equal += 1;
                }
            }
        }
        out.push(Record::exact(
            "cone_spans_distinct",
            anchor::CONE_SPANS,
            inputs.clone(),
            json!(0),
            json!(equal),
        ));
    } else {
        out.push(Record::skipped(
            "cone_spans_distinct",
            anchor::CONE_SPANS,
            inputs.clone(),
            format!("more than {VERIFY_SPAN_FLAGS} flags"),
        ));
    }
    let size = grid_size(lat)?;
    if size <= VERIFY_GRID_POINTS {
        let pts = grid_points(lat)?;
        out.push(Record::exact(
            "incomparability_witnesses",
            anchor::INCOMPARABLE,
            json!({"n": n, "q": q, "points": pts.len(), "grid": ["1/2", "1/3"]}),
            json!(0),
            json!(incomparability_failures(lat, &pts)),
        ));
    } else {
        out.push(Record::skipped(
            "incomparability_witnesses",
            anchor::INCOMPARABLE,
            json!({"n": n, "q": q, "points": size}),
            format!("grid has more than {VERIFY_GRID_POINTS} points"),
        ));
    }
    Ok(out)
}

/// `∏_{i=1}^{n} (Q - q^i)`.
pub fn omega_formula(n: u64, q: u64, big_q: u64) -> BigInt {
    (1..=n)
        .map(|i| BigInt::from(big_q) - BigInt::from(q).pow(i as u32))
        .product()
}

fn chart_suite(ambient: &Ambient, n: u64, q: u64, ext: u32) -> Result<Vec<Record>, CliError> {
    let inputs = json!({"n": n, "q": q, "ext": ext});
    let skip = |reason: String| {
        Ok(vec![Record::skipped(
            "chart_lhs_equals_rhs",
            anchor::CHART,
            inputs.clone(),
            reason,
        )])
    };
    let field = ambient.field();
    if !field.is_prime_field() {
        return skip("extension fields are embedded over a prime base field only".into());
    }
    let Ok(big_field) = Field::new(u64::from(field.characteristic()), ext) else {
        return skip(format!(
            "GF({q}^{ext}) is outside the supported field range"
        ));
    };
    let big_q = u64::from(big_field.order());
    if big_q
        .checked_pow(n as u32)
        .is_none_or(|t| t > VERIFY_CHART_POINTS)
    {
        return skip(format!("more than {VERIFY_CHART_POINTS} chart points"));
    }
    let emb = FieldEmbedding::new(field, &big_field)?;
    let w = ambient.width();
    let basis: Vec<Vec<u32>> = (0..w)
        .map(|i| (0..w).map(|j| u32::from(i == j)).collect())
        .collect();
    let cp = valfan::chart_polynomial(ambient, &basis)?;
    let sweep = valfan::chart_sweep(&cp, &emb)?;
    Ok(vec![
        Record::exact(
            "chart_lhs_equals_rhs",
            anchor::CHART,
            json!({"n": n, "q": q, "ext": ext, "points": sweep.points, "factors": cp.factors().len()}),
            json!(0),
            json!(sweep.mismatches.len()),
        ),
        Record::exact(
            "omega_point_count",
            anchor::OMEGA_COUNT,
            inputs.clone(),
            bigi(&omega_formula(n, q, big_q)),
            json!(sweep.omega_count),
        ),
        Record::exact(
            "chart_count_matches_omega",
            anchor::CHART,
            inputs,
            json!(sweep.omega_count),
            json!(sweep.chart_count),
        ),
    ])
}

struct AutOutcome {
    records: Vec<Record>,
    budget_exhausted: bool,
}

fn aut_suite(lat: &Arc<Lattice>, n: u64, q: u64, budget: u64) -> Result<AutOutcome, CliError> {
    let field = lat.ambient().field();
    let a = u64::from(field.degree());
    let prime = field.is_prime_field();
    let pgl = ct::pgl_order(n, q);
    let expected = &pgl * a;
    let inputs = json!({"n": n, "q": q});
    let skip = |reason: String| AutOutcome {
        records: vec![Record::skipped(
            "collineation_count",
            anchor::COLLINEATIONS,
            inputs.clone(),
            reason,
        )],
        budget_exhausted: false,
    };
    if lat.points().len() > 128 {
        return Ok(skip("more than 128 points".into()));
    }
    if u64::try_from(&expected).map_or(true, |e| e > VERIFY_GROUP_LIMIT) {
        return Ok(skip(format!("group order above {VERIFY_GROUP_LIMIT}")));
    }
    let found = match autgroup::collineation_search(lat, budget) {
        Ok(f) => f,
        Err(AutError::BudgetExceeded { count, limit }) => {
            let mut s = skip(format!(
                "search stopped after {count} nodes (budget {limit})"
            ));
            s.budget_exhausted = true;
            return Ok(s);
        }
        Err(e) => return Err(e.into()),
    };
    let mut out = vec![Record::exact(
        "collineation_count",
        if prime {
            anchor::COLLINEATIONS
        } else {
            anchor::SEMILINEAR
        },
        json!({"n": n, "q": q, "pgl_order": big(&pgl), "field_degree": a}),
        big(&expected),
        json!(found.len()),
    )];
    let chow = ChowGroup::new(lat);
    let k = chow.canonical_class();
    let h_ref = lat.hyperplanes()[0].clone();
    let moved = found
        .iter()
        .filter(|g| chow.pullback(g.permutation(), &k, &h_ref).ok().as_ref() != Some(&k))
        .count();
    out.push(Record::exact(
        "canonical_fixed_by_collineations",
        anchor::CANONICAL_FIXED,
        inputs.clone(),
        json!(0),
        json!(moved),
    ));
    if prime {
        let cells = (lat.ambient().width() * lat.ambient().width()) as u32;
        if q.checked_pow(cells)
            .is_some_and(|t| t <= VERIFY_MATRIX_LIMIT)
        {
            let mut induced: Vec<Vec<usize>> = autgroup::enumerate_pgl(lat.ambient())?
                .iter()
                .map(|g| {
                    autgroup::induced_permutation(lat, g).map(|p| p.permutation().images().to_vec())
                })
                .collect::<Result<_, _>>()?;
            induced.sort();
            let searched: Vec<Vec<usize>> = found
                .iter()
                .map(|g| g.permutation().images().to_vec())
                .collect();
            let differ = if induced == searched {
                0
            } else {
                induced.len().abs_diff(searched.len()).max(1)
            };
            out.push(Record::exact(
                "collineations_equal_pgl_image",
                anchor::COLLINEATIONS,
                inputs.clone(),
                json!(0),
                json!(differ),
            ));
        }
        let failures = found
            .iter()
            .filter(|g| {
                let sigma = g.point_images();
                match autgroup::realize_as_pgl(lat, &sigma) {
                    Ok(m) => autgroup::induced_permutation(lat, &m)
                        .map(|p| p.permutation() != g.permutation())
                        .unwrap_or(true),
                    Err(_) => true,
                }
            })
            .count();
        out.push(Record::exact(
            "realize_round_trip",
            anchor::REALIZE,
            inputs.clone(),
            json!(0),
            json!(failures),
        ));
    } else {
        let frob = autgroup::frobenius_point_permutation(lat)?;
        let actual = match autgroup::realize_as_pgl(lat, &frob) {
            Ok(_) => "realized".to_string(),
            Err(AutError::NotRealizable) => "NotRealizable".to_string(),
            Err(e) => format!("{e:?}"),
        };
        out.push(Record::exact(
            "frobenius_twist_not_realizable",
            anchor::FROBENIUS,
            inputs,
            json!("NotRealizable"),
            json!(actual),
        ));
    }
    Ok(AutOutcome {
        records: out,
        budget_exhausted: false,
    })
}

/// Runs every suite that applies to the configuration.
pub fn run_verify(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let (n, q) = (config.n as u64, config.q);
    let counting_only = matches!(
        config.command,
        crate::Command::Verify {
            counting_only: true
        }
    );
    let mut records = counting_suite(n, q);
    let mut budget_exhausted = false;
    if counting_only {
        return Ok(Report::new(config.clone(), records, false));
    }
    let params = json!({"n": n, "q": q});
    if n == 1 {
        records.push(Record::skipped(
            "degenerate_line",
            anchor::DEGENERATE,
            params.clone(),
            "P^1 has no subspaces of codimension >= 2; the blow-up is P^1 itself and the divisor and automorphism suites are vacuous",
        ));
    }
    let size = lattice_size(n, q);
    if size > BigUint::from(VERIFY_LATTICE_LIMIT) {
        records.push(Record::skipped(
            "lattice_suites",
            anchor::SUBSPACE_COUNT,
            json!({"n": n, "q": q, "subspaces": big(&size)}),
            format!("lattice exceeds {VERIFY_LATTICE_LIMIT} subspaces"),
        ));
    } else {
        let lat = Arc::new(Lattice::for_params(q, config.n)?);
        records.extend(enumeration_suite(&lat, n, q));
        if n >= 2 {
            records.extend(chow_suite(&lat, n, q)?);
        }
        records.extend(fan_suite(&lat, n, q)?);
        if n >= 2 {
            let aut = aut_suite(&lat, n, q, config.budget)?;
            budget_exhausted |= aut.budget_exhausted;
            records.extend(aut.records);
        }
    }
    let ambient = Ambient::new(config.n, Field::with_order(q)?)?;
    records.extend(chart_suite(&ambient, n, q, config.ext)?);
    Ok(Report::new(config.clone(), records, budget_exhausted))
}
