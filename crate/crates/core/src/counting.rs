//! Exact q-analog counts: Gaussian binomials, the subspace counts `λ` and
//! `ν`, and the Picard rank of the exceptional divisors of the wonderful
//! blow-up together with the inequalities that separate them.
//!
//! Everything is computed with arbitrary-precision integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Gaussian binomial `[m choose k]_q`.
pub fn gaussian_binomial(m: u64, k: u64, q: u64) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    let q = big(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((m - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Number of `d`-dimensional linear subspaces of P^n over GF(q).
pub fn gaussian_count(n: u64, d: u64, q: u64) -> BigUint {
    gaussian_binomial(n + 1, d + 1, q)
}

/// `#P^t(GF(q)) = (q^{t+1} - 1)/(q - 1)`.
pub fn projective_points(t: u64, q: u64) -> BigUint {
    gaussian_count(t, 0, q)
}

/// Nontrivial subspaces of codimension at least 2 in P^d; zero for `d < 2`.
pub fn lambda(d: u64, q: u64) -> BigUint {
    if d < 2 {
        return BigUint::zero();
    }
    (0..=d - 2).map(|i| gaussian_count(d, i, q)).sum()
}

/// Nontrivial subspaces of codimension at least 2 in P^t not contained in a
/// fixed hyperplane.
///
/// Counted directly: an `(i+1)`-dimensional subspace of GF(q)^{t+1} that
/// avoids a fixed hyperplane is a graph over an `i`-dimensional subspace of
/// it, giving `q^{t-i} [t choose i]_q` of them.
pub fn nu(t: u64, q: u64) -> BigUint {
    assert!(t >= 2, "nu is defined for t >= 2");
    (0..=t - 2)
        .map(|i| big(q).pow((t - i) as u32) * gaussian_binomial(t, i, q))
        .sum()
}

/// `ν(t)` read off from `λ(t) = ν(t) + λ(t-1) + #P^{t-1}`.
pub fn nu_from_recursion(t: u64, q: u64) -> BigUint {
    assert!(t >= 2, "nu is defined for t >= 2");
    lambda(t, q) - lambda(t - 1, q) - projective_points(t - 1, q)
}

/// 1 at the two ends of `0..=n-1`, 2 strictly inside.
pub fn epsilon(d: u64, n: u64) -> u64 {
    if d == 0 || d + 1 == n {
        1
    } else {
        2
    }
}

/// Rank of CH¹ of the exceptional divisor over a `d`-dimensional subspace.
pub fn rank_ch1_exceptional(d: u64, n: u64, q: u64) -> BigUint {
    assert!(d < n, "dimension {d} out of range for P^{n}");
    lambda(d, q) + lambda(n - 1 - d, q) + big(epsilon(d, n))
}

/// One instance of an inequality, both sides exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityRecord {
    pub name: &'static str,
    pub params: Vec<u64>,
    #[serde(serialize_with = "crate::serialize_big")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::serialize_big")]
    pub rhs: BigInt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub n: u64,
    pub q: u64,
    pub records: Vec<InequalityRecord>,
    pub pass: bool,
}

fn signed(x: BigUint) -> BigInt {
    BigInt::from(x)
}

/// Checks `λ(t) - λ(t-1) > λ(t-1) + 1` for `2 <= t <= n` and
/// `λ(n-1-d) - λ(n-1-d') > λ(d') - λ(d) + 1` for all `d < d' < n-1-d`.
pub fn check_inequalities(n: u64, q: u64) -> InequalityReport {
    let lam = |x: u64| signed(lambda(x, q));
    let mut records = Vec::new();
    for t in 2..=n {
        let lhs = lam(t) - lam(t - 1);
        let rhs = lam(t - 1) + 1;
        records.push(InequalityRecord {
            name: "lambda_growth",
            params: vec![t],
            holds: lhs > rhs,
            lhs,
            rhs,
        });
    }
    for d in 0..n {
        let upper = (n - 1).saturating_sub(d);
        for dp in (d + 1)..upper {
            let lhs = lam(n - 1 - d) - lam(n - 1 - dp);
            let rhs = lam(dp) - lam(d) + 1;
            records.push(InequalityRecord {
                name: "rank_gap",
                params: vec![d, dp],
                holds: lhs > rhs,
                lhs,
                rhs,
            });
        }
    }
    let pass = records.iter().all(|r| r.holds);
    InequalityReport {
        n,
        q,
        records,
        pass,
    }
}

/// `(d, d')` pairs with `d < d' < n - 1 - d`.
pub fn admissible_pairs(n: u64) -> Vec<(u64, u64)> {
    (0..n)
        .flat_map(|d| ((d + 1)..(n - 1).saturating_sub(d)).map(move |dp| (d, dp)))
        .collect()
}

/// Order of PGL(n+1, q).
pub fn pgl_order(n: u64, q: u64) -> BigUint {
    let qb = big(q);
    let top = qb.pow((n + 1) as u32);
    let prod: BigUint = (0..=n).map(|i| &top - qb.pow(i as u32)).product();
    prod / (qb - 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_count(2, 0, 2), big(7));
        assert_eq!(gaussian_count(3, 1, 2), big(35));
        for q in QS {
            assert_eq!(gaussian_count(1, 0, q), big(q + 1));
        }
    }

    #[test]
    fn gaussian_symmetry() {
        for q in QS {
            for n in 1..8 {
                for d in 0..n {
                    assert_eq!(
                        gaussian_binomial(n + 1, d + 1, q),
                        gaussian_binomial(n + 1, n - d, q)
                    );
                }
            }
        }
    }

    #[test]
    fn lambda_nu_examples() {
        assert_eq!(lambda(0, 5), big(0));
        assert_eq!(lambda(1, 5), big(0));
        assert_eq!(lambda(2, 2), big(7));
        assert_eq!(lambda(3, 2), big(50));
        assert_eq!(nu(2, 2), big(4));
        assert_eq!(nu(2, 3), big(9));
        assert_eq!(
            lambda(2, 2),
            nu(2, 2) + lambda(1, 2) + projective_points(1, 2)
        );
    }

    #[test]
    fn nu_two_routes_agree() {
        for q in QS {
            for t in 2..=6 {
                assert_eq!(nu(t, q), nu_from_recursion(t, q), "t={t} q={q}");
                assert!(nu(t, q) >= lambda(t - 1, q));
            }
        }
    }

    #[test]
    fn epsilon_and_rank_examples() {
        assert_eq!(epsilon(0, 3), 1);
        assert_eq!(epsilon(1, 3), 2);
        assert_eq!(epsilon(2, 3), 1);
        assert_eq!(epsilon(0, 1), 1);
        assert_eq!(rank_ch1_exceptional(1, 3, 2), big(2));
        assert_eq!(rank_ch1_exceptional(2, 3, 2), big(8));
        assert_eq!(rank_ch1_exceptional(0, 3, 2), big(8));
    }

    #[test]
    fn inequality_reports() {
        let r = check_inequalities(3, 2);
        let t2 = &r.records[0];
        assert_eq!(
            (t2.lhs.clone(), t2.rhs.clone()),
            (BigInt::from(7), BigInt::from(1))
        );
        assert!(r.pass);
        assert!(check_inequalities(5, 2).pass);
        let r2 = check_inequalities(2, 7);
        assert!(r2.pass);
        assert!(r2.records.iter().all(|r| r.name == "lambda_growth"));
        assert!(admissible_pairs(2).is_empty());
        assert_eq!(admissible_pairs(5), vec![(0, 1), (0, 2), (0, 3), (1, 2)]);
    }

    #[test]
    fn pgl_orders() {
        assert_eq!(pgl_order(2, 2), big(168));
        assert_eq!(pgl_order(1, 2), big(6));
        assert_eq!(pgl_order(2, 3), big(5616));
        assert_eq!(pgl_order(2, 4), big(60480));
    }

    #[test]
    fn large_parameters_stay_exact() {
        let r = rank_ch1_exceptional(0, 9, 7);
        assert!(r > big(u64::MAX / 1_000_000_000));
        assert!(check_inequalities(9, 7).pass);
    }
}
