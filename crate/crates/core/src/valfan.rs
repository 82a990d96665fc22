//! Divisorial valuations on units of the arrangement complement, the cone
//! complex they span, and the affine chart attached to a complete flag.
//!
//! Units are degree-zero monomials in linear forms. For a nontrivial
//! subspace `L`, `ord_L(v)` is 1 when `L ⊆ Z(v)` and 0 otherwise, extended
//! additively; a point of the cone over a flag `F` assigns a weight
//! `r_L ∈ (0, 1)` to each member and evaluates a unit to `∏ r_L^{ord_L}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldElement, FieldEmbedding, GfError};
use crate::linalg::{self, Row};
use crate::projspace::{Ambient, Flag, FlagType, Lattice, LinearForm, ProjError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("monomial has degree {0}, expected 0")]
    DegreeNotZero(i64),
    #[error("objects belong to different ambient spaces")]
    AmbientMismatch,
    #[error("the two flags are equal")]
    EqualFlags,
    #[error("the two cone points are equal")]
    EqualPoints,
    #[error("invalid cone point: {0}")]
    InvalidConePoint(String),
    #[error("no separating unit found within the search budget")]
    WitnessNotFound,
    #[error("the given vectors are not a basis")]
    NotABasis,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Lattice(#[from] ProjError),
}

pub type Result<T> = std::result::Result<T, FanError>;

/// `∏ v_i^{m_i}` with `Σ m_i = 0`, forms canonical and distinct.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitMonomial {
    ambient: Ambient,
    factors: Vec<(LinearForm, i64)>,
}

impl fmt::Debug for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(v, e)| format!("{:?}^{}", v.coefficients(), e))
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl Serialize for UnitMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factor<'a> {
            form: &'a [u32],
            exponent: i64,
        }
        let fs: Vec<Factor<'_>> = self
            .factors
            .iter()
            .map(|(v, e)| Factor {
                form: v.coefficients(),
                exponent: *e,
            })
            .collect();
        fs.serialize(s)
    }
}

impl UnitMonomial {
    pub fn new<I>(ambient: &Ambient, factors: I) -> Result<UnitMonomial>
    where
        I: IntoIterator<Item = (LinearForm, i64)>,
    {
        let mut merged: BTreeMap<LinearForm, i64> = BTreeMap::new();
        for (v, e) in factors {
            if v.ambient() != ambient {
                return Err(FanError::AmbientMismatch);
            }
            *merged.entry(v).or_insert(0) += e;
        }
        let factors: Vec<(LinearForm, i64)> = merged.into_iter().filter(|&(_, e)| e != 0).collect();
        let degree: i64 = factors.iter().map(|(_, e)| e).sum();
        if degree != 0 {
            return Err(FanError::DegreeNotZero(degree));
        }
        Ok(UnitMonomial {
            ambient: ambient.clone(),
            factors,
        })
    }

    pub fn one(ambient: &Ambient) -> UnitMonomial {
        UnitMonomial {
            ambient: ambient.clone(),
            factors: Vec::new(),
        }
    }

    /// `v / v'`.
    pub fn ratio(v: &LinearForm, v_prime: &LinearForm) -> Result<UnitMonomial> {
        UnitMonomial::new(v.ambient(), [(v.clone(), 1), (v_prime.clone(), -1)])
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn factors(&self) -> &[(LinearForm, i64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &UnitMonomial) -> Result<UnitMonomial> {
        if self.ambient != other.ambient {
            return Err(FanError::AmbientMismatch);
        }
        UnitMonomial::new(
            &self.ambient,
            self.factors.iter().chain(&other.factors).cloned(),
        )
    }

    pub fn inv(&self) -> UnitMonomial {
        self.pow(-1)
    }

    pub fn pow(&self, k: i64) -> UnitMonomial {
        let factors = if k == 0 {
            Vec::new()
        } else {
            self.factors
                .iter()
                .map(|(v, e)| (v.clone(), e * k))
                .collect()
        };
        UnitMonomial {
            ambient: self.ambient.clone(),
            factors,
        }
    }
}

/// Valuation of a unit along the exceptional divisor of `L`.
pub fn ord(l: &Subspace, f: &UnitMonomial) -> Result<i64> {
    if l.ambient() != f.ambient() {
        return Err(FanError::AmbientMismatch);
    }
    Ok(f.factors
        .iter()
        .filter(|(v, _)| l.contains_form(v.coefficients()))
        .map(|(_, e)| e)
        .sum())
}

/// An interior point of the cone over a flag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConePoint {
    flag: Flag,
    values: Vec<BigRational>,
}

impl fmt::Debug for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|r| r.to_string()).collect();
        write!(f, "{:?}@[{}]", self.flag, vals.join(", "))
    }
}

impl ConePoint {
    /// `values[i]` is the weight of `flag.members()[i]`.
    pub fn new(flag: Flag, values: Vec<BigRational>) -> Result<ConePoint> {
        if values.len() != flag.len() {
            return Err(FanError::InvalidConePoint(format!(
                "{} values for a flag of length {}",
                values.len(),
                flag.len()
            )));
        }
        if let Some(bad) = values
            .iter()
            .find(|r| **r <= BigRational::zero() || **r >= BigRational::one())
        {
            return Err(FanError::InvalidConePoint(format!(
                "{bad} is not in (0, 1)"
            )));
        }
        Ok(ConePoint { flag, values })
    }

    /// Convenience for small rationals `num/den`.
    pub fn from_ratios(flag: Flag, ratios: &[(i64, i64)]) -> Result<ConePoint> {
        let values = ratios
            .iter()
            .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
            .collect();
        ConePoint::new(flag, values)
    }

    /// A point on the ray of a single subspace.
    pub fn on_ray(l: &Subspace, r: BigRational) -> Result<ConePoint> {
        ConePoint::new(Flag::new(vec![l.clone()])?, vec![r])
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

fn rational_pow(r: &BigRational, e: i64) -> BigRational {
    match e.cmp(&0) {
        Ordering::Equal => BigRational::one(),
        Ordering::Greater => num_traits::pow(r.clone(), e as usize),
        Ordering::Less => num_traits::pow(r.recip(), (-e) as usize),
    }
}

/// `|f(x)| = ∏_{L ∈ F} r_L^{ord_L(f)}`.
pub fn eval_cone(x: &ConePoint, f: &UnitMonomial) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (l, r) in x.flag.members().iter().zip(&x.values) {
        let e = ord(l, f)?;
        if e != 0 {
            acc *= rational_pow(r, e);
        }
    }
    Ok(acc)
}

/// Which flag the certificate's unit is strictly contracting on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// `|v/v'| < 1` on the interior of the first flag's cone, `= 1` on the
    /// second.
    Forward,
    /// Roles swapped: the first flag was contained in the second.
    Reversed,
}

/// Two hyperplane equations whose ratio separates two cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationCertificate {
    pub v: LinearForm,
    pub v_prime: LinearForm,
    /// The member occurring in only one flag, where `ord(v/v') = 1`.
    pub witness: Subspace,
    pub orientation: Orientation,
    /// Complete flag through the zero-side flag used for the construction.
    pub completion: Flag,
}

impl SeparationCertificate {
    pub fn unit(&self) -> UnitMonomial {
        UnitMonomial::ratio(&self.v, &self.v_prime).expect("distinct forms of one ambient")
    }

    /// `(positive side, zero side)` for the flags this was built from.
    pub fn sides<'a>(&self, f: &'a Flag, f_prime: &'a Flag) -> (&'a Flag, &'a Flag) {
        match self.orientation {
            Orientation::Forward => (f, f_prime),
            Orientation::Reversed => (f_prime, f),
        }
    }

    pub fn verify(&self, f: &Flag, f_prime: &Flag) -> bool {
        let (pos, zero) = self.sides(f, f_prime);
        verify_certificate(pos, zero, &self.v, &self.v_prime)
    }
}

/// The separation contract: `ord_M(v/v') = 0` for every `M ∈ F'`,
/// `ord_M(v/v') >= 0` for every `M ∈ F`, and `= 1` for some `M ∈ F` not in
/// `F'`.
pub fn verify_certificate(f: &Flag, f_prime: &Flag, v: &LinearForm, v_prime: &LinearForm) -> bool {
    let Ok(unit) = UnitMonomial::ratio(v, v_prime) else {
        return false;
    };
    let ord_of = |m: &Subspace| ord(m, &unit).ok();
    let zero_side = f_prime.members().iter().all(|m| ord_of(m) == Some(0));
    let nonneg = f
        .members()
        .iter()
        .all(|m| ord_of(m).is_some_and(|e| e >= 0));
    let strict = f
        .members()
        .iter()
        .any(|m| !f_prime.contains(m) && ord_of(m) == Some(1));
    zero_side && nonneg && strict
}

/// Extends `partial` to a complete flag, avoiding `avoid` in its dimension.
fn complete_flag(lattice: &Lattice, partial: &Flag, avoid: &Subspace) -> Result<Flag> {
    let n = lattice.ambient().n();
    let fixed: Vec<(usize, usize)> = partial
        .members()
        .iter()
        .map(|m| {
            lattice
                .index_of(m)
                .map(|i| (m.dim(), i))
                .ok_or(FanError::AmbientMismatch)
        })
        .collect::<Result<_>>()?;
    let avoid_idx = lattice.index_of(avoid);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for d in 0..n {
        if let Some(&(_, i)) = fixed.iter().find(|&&(fd, _)| fd == d) {
            chosen.push(i);
            continue;
        }
        let upper = fixed.iter().find(|&&(fd, _)| fd > d).map(|&(_, i)| i);
        let pick = lattice.dim_range(d).find(|&c| {
            Some(c) != avoid_idx
                && chosen.last().is_none_or(|&lo| lattice.contained(lo, c))
                && upper.is_none_or(|up| lattice.contained(c, up))
        });
        chosen.push(pick.expect("intervals of a projective lattice have room"));
    }
    Ok(Flag::new(
        chosen.into_iter().map(|i| lattice.get(i).clone()).collect(),
    )?)
}

/// Builds the separating pair `(v, v')` for two distinct flags.
///
/// Take `L` in one flag but not the other (the zero side), complete the zero
/// side to a full flag whose member `L_i` of dimension `dim L` differs from
/// `L`, and pick `u ∈ W \ W_i`, `u_i ∈ W_i \ W` where `W`, `W_i` are the form
/// spaces. Then `v = u`, `v' = u + u_i` define hyperplanes in the same
/// position relative to the complete flag, and `v` vanishes on `L` while `v'`
/// does not.
pub fn separation_certificate(
    lattice: &Lattice,
    f: &Flag,
    f_prime: &Flag,
) -> Result<SeparationCertificate> {
    if f.ambient() != lattice.ambient() || f_prime.ambient() != lattice.ambient() {
        return Err(FanError::AmbientMismatch);
    }
    if f == f_prime {
        return Err(FanError::EqualFlags);
    }
    let (positive, zero, orientation) = match f.members().iter().find(|m| !f_prime.contains(m)) {
        Some(_) => (f, f_prime, Orientation::Forward),
        None => (f_prime, f, Orientation::Reversed),
    };
    let witness = positive
        .members()
        .iter()
        .find(|m| !zero.contains(m))
        .expect("flags differ")
        .clone();
    let completion = complete_flag(lattice, zero, &witness)?;
    let partner = completion
        .member_of_dim(witness.dim())
        .expect("complete flag has every dimension");
    let field = lattice.ambient().field();

    let u = witness
        .vanishing_forms()
        .into_iter()
        .find(|x| !partner.contains_form(x))
        .expect("distinct subspaces of equal dimension");
    let u_i = partner
        .vanishing_forms()
        .into_iter()
        .find(|x| !witness.contains_form(x))
        .expect("distinct subspaces of equal dimension");
    let sum: Row = u.iter().zip(&u_i).map(|(&a, &b)| field.add(a, b)).collect();
    let ambient = lattice.ambient();
    Ok(SeparationCertificate {
        v: LinearForm::new(ambient, &u)?,
        v_prime: LinearForm::new(ambient, &sum)?,
        witness,
        orientation,
        completion,
    })
}

/// Valuations of `v/v0` (rows, one per normalized form `v`, with `v0 = e_0`)
/// along each member of the flag (columns).
pub fn cone_matrix(f: &Flag) -> Vec<Vec<i64>> {
    let ambient = f.ambient();
    let v0 = ambient.coordinate_form(0);
    ambient
        .all_forms()
        .iter()
        .map(|v| {
            f.members()
                .iter()
                .map(|l| {
                    i64::from(l.contains_form(v.coefficients()))
                        - i64::from(l.contains_form(v0.coefficients()))
                })
                .collect()
        })
        .collect()
}

pub fn column_rank(m: &[Vec<i64>]) -> usize {
    linalg::rational_rank(m)
}

/// Whether two matrices with the same rows have the same column span over Q.
pub fn same_column_span(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let ra = linalg::rational_rank(a);
    let rb = linalg::rational_rank(b);
    ra == rb && linalg::rational_rank(&linalg::hconcat(a, b)) == ra
}

/// Units `(f, g)` with `|f(x)| < |f(y)|` and `|g(x)| > |g(y)|`.
///
/// Ratios of normalized forms are tried in canonical order; when the flags
/// differ the separation certificate is the fallback.
pub fn incomparable(
    lattice: &Lattice,
    x: &ConePoint,
    y: &ConePoint,
) -> Result<(UnitMonomial, UnitMonomial)> {
    if x == y {
        return Err(FanError::EqualPoints);
    }
    let orient = |f: UnitMonomial| -> Result<Option<(UnitMonomial, UnitMonomial)>> {
        let (ex, ey) = (eval_cone(x, &f)?, eval_cone(y, &f)?);
        Ok(match ex.cmp(&ey) {
            Ordering::Less => Some((f.clone(), f.inv())),
            Ordering::Greater => Some((f.inv(), f)),
            Ordering::Equal => None,
        })
    };
    let forms = lattice.ambient().all_forms();
    for v in &forms {
        for w in &forms {
            if v == w {
                continue;
            }
            if let Some(pair) = orient(UnitMonomial::ratio(v, w)?)? {
                return Ok(pair);
            }
        }
    }
    if x.flag != y.flag {
        let cert = separation_certificate(lattice, &x.flag, &y.flag)?;
        if let Some(pair) = orient(cert.unit())? {
            return Ok(pair);
        }
    }
    Err(FanError::WitnessNotFound)
}

/// Summary of certifying every ordered pair of distinct flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationSummary {
    pub flags: usize,
    pub pairs: usize,
    pub failures: Vec<(usize, usize)>,
}

/// A certificate with its verification, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord {
    #[serde(rename = "flagA")]
    pub flag_a: Flag,
    #[serde(rename = "flagB")]
    pub flag_b: Flag,
    pub v: LinearForm,
    #[serde(rename = "v'")]
    pub v_prime: LinearForm,
    pub orientation: Orientation,
    #[serde(rename = "ordTable")]
    pub ord_table: Vec<OrdEntry>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrdEntry {
    pub subspace: Subspace,
    pub ord: i64,
}

pub fn certificate_record(lattice: &Lattice, a: &Flag, b: &Flag) -> Result<CertificateRecord> {
    let cert = separation_certificate(lattice, a, b)?;
    let unit = cert.unit();
    let mut members: Vec<Subspace> = a.members().iter().chain(b.members()).cloned().collect();
    members.sort();
    members.dedup();
    let ord_table = members
        .into_iter()
        .map(|m| {
            let e = ord(&m, &unit)?;
            Ok(OrdEntry {
                subspace: m,
                ord: e,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CertificateRecord {
        flag_a: a.clone(),
        flag_b: b.clone(),
        pass: cert.verify(a, b),
        v: cert.v,
        v_prime: cert.v_prime,
        orientation: cert.orientation,
        ord_table,
    })
}

/// Builds and verifies a certificate for every ordered pair of distinct
/// flags, in parallel, reporting failing pairs by flag index.
pub fn certify_all(lattice: &Lattice) -> Result<CertificationSummary> {
    let flags = lattice.enumerate_flags(&FlagType::All)?;
    let m = flags.len();
    let mut failures: Vec<(usize, usize)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let flags = &flags;
            (0..m).filter(move |&j| j != i).filter_map(move |j| {
                let ok = separation_certificate(lattice, &flags[i], &flags[j])
                    .map(|c| c.verify(&flags[i], &flags[j]))
                    .unwrap_or(false);
                (!ok).then_some((i, j))
            })
        })
        .collect();
    failures.sort_unstable();
    Ok(CertificationSummary {
        flags: m,
        pairs: m * (m - 1),
        failures,
    })
}

/// One factor `1 + a_i t_i + a_{i+1} t_i t_{i+1} + ... + a_n t_i⋯t_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartFactor {
    /// 1-based index `i` of the first variable.
    pub start: usize,
    /// `(a_i, ..., a_n)` as base-field codes.
    pub coeffs: Vec<u32>,
}

/// The product of chart factors whose nonvanishing cuts out the complement of
/// the rational hyperplanes in the chart of a complete flag.
#[derive(Debug, Clone, Serialize)]
pub struct ChartPolynomial {
    #[serde(skip)]
    ambient: Ambient,
    basis: Vec<Row>,
    factors: Vec<ChartFactor>,
}

/// Factors ordered by `i` ascending, then coefficient tuples in
/// lexicographic order.
pub fn chart_polynomial(ambient: &Ambient, basis: &[Row]) -> Result<ChartPolynomial> {
    let width = ambient.width();
    if basis.len() != width || basis.iter().any(|r| r.len() != width) {
        return Err(FanError::NotABasis);
    }
    if linalg::rank(ambient.field(), basis) != width {
        return Err(FanError::NotABasis);
    }
    let n = ambient.n();
    let q = ambient.q() as u64;
    let mut factors = Vec::new();
    for start in 1..=n {
        let len = n - start + 1;
        let total = q.pow(len as u32);
        for code in 0..total {
            // first coefficient most significant, so codes run lexicographically
            let mut coeffs = vec![0u32; len];
            let mut rest = code;
            for c in coeffs.iter_mut().rev() {
                *c = (rest % q) as u32;
                rest /= q;
            }
            factors.push(ChartFactor { start, coeffs });
        }
    }
    Ok(ChartPolynomial {
        ambient: ambient.clone(),
        basis: basis.to_vec(),
        factors,
    })
}

impl ChartPolynomial {
    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn factors(&self) -> &[ChartFactor] {
        &self.factors
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    fn check_embedding(&self, emb: &FieldEmbedding) -> Result<()> {
        if emb.source() != self.ambient.field() {
            return Err(GfError::FieldMismatch {
                left: self.ambient.q(),
                right: emb.source().order(),
            }
            .into());
        }
        Ok(())
    }

    /// Value of the product at `t ∈ K^n`, on raw codes of the target field.
    pub fn eval_raw(&self, t: &[u32], emb: &FieldEmbedding) -> u32 {
        let k = emb.target();
        let mut acc = 1;
        for fac in &self.factors {
            let mut val = 1;
            let mut mono = 1;
            for (j, &a) in fac.coeffs.iter().enumerate() {
                mono = k.mul(mono, t[fac.start - 1 + j]);
                val = k.add(val, k.mul(emb.embed_raw(a), mono));
            }
            acc = k.mul(acc, val);
            if acc == 0 {
                break;
            }
        }
        acc
    }

    pub fn eval(&self, t: &[FieldElement], emb: &FieldEmbedding) -> Result<FieldElement> {
        self.check_embedding(emb)?;
        let raw = raw_point(t, emb, self.ambient.n())?;
        Ok(emb.target().element(self.eval_raw(&raw, emb))?)
    }
}

fn raw_point(t: &[FieldElement], emb: &FieldEmbedding, n: usize) -> Result<Vec<u32>> {
    if t.len() != n {
        return Err(FanError::InvalidConePoint(format!(
            "expected {n} chart coordinates"
        )));
    }
    t.iter()
        .map(|x| {
            if x.field() != emb.target() {
                Err(FanError::Field(GfError::FieldMismatch {
                    left: x.field().order(),
                    right: emb.target().order(),
                }))
            } else {
                Ok(x.value())
            }
        })
        .collect()
}

/// `[1 : t_1 : t_1 t_2 : ... : t_1⋯t_n]`.
pub fn chart_to_projective(t: &[u32], emb: &FieldEmbedding) -> Vec<u32> {
    let k = emb.target();
    let mut x = Vec::with_capacity(t.len() + 1);
    x.push(1);
    let mut acc = 1;
    for &ti in t {
        acc = k.mul(acc, ti);
        x.push(acc);
    }
    x
}

/// Whether a K-point avoids every k-rational hyperplane. The k-rational
/// forms in basis coordinates are exactly the nonzero k-combinations of the
/// coordinates, whichever basis was used.
pub fn avoids_rational_hyperplanes(ambient: &Ambient, x: &[u32], emb: &FieldEmbedding) -> bool {
    let k = emb.target();
    ambient.all_forms().iter().all(|v| {
        let s = v
            .coefficients()
            .iter()
            .zip(x)
            .fold(0, |acc, (&c, &xi)| k.add(acc, k.mul(emb.embed_raw(c), xi)));
        s != 0
    })
}

/// `(lhs, rhs)` where `lhs` is "every `t_i ≠ 0` and `f(t) ≠ 0`" and `rhs` is
/// "the corresponding point lies on no k-rational hyperplane".
pub fn chart_point_test(
    t: &[FieldElement],
    cp: &ChartPolynomial,
    emb: &FieldEmbedding,
) -> Result<(bool, bool)> {
    cp.check_embedding(emb)?;
    let raw = raw_point(t, emb, cp.ambient.n())?;
    Ok(chart_point_test_raw(&raw, cp, emb))
}

fn chart_point_test_raw(t: &[u32], cp: &ChartPolynomial, emb: &FieldEmbedding) -> (bool, bool) {
    let lhs = t.iter().all(|&x| x != 0) && cp.eval_raw(t, emb) != 0;
    let rhs = avoids_rational_hyperplanes(&cp.ambient, &chart_to_projective(t, emb), emb);
    (lhs, rhs)
}

/// Exhaustive comparison over `K^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartSweep {
    pub points: u64,
    /// Points with `lhs` true.
    pub chart_count: u64,
    /// Points of P^n(K) off every k-rational hyperplane, counted directly.
    pub omega_count: u64,
    pub mismatches: Vec<Vec<u32>>,
}

impl ChartSweep {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.chart_count == self.omega_count
    }
}

/// Runs [`chart_point_test`] over all of `K^n` and counts `Ω(K)` by direct
/// enumeration of `P^n(K)`.
pub fn chart_sweep(cp: &ChartPolynomial, emb: &FieldEmbedding) -> Result<ChartSweep> {
    cp.check_embedding(emb)?;
    let n = cp.ambient.n();
    let qk = emb.target().order() as u64;
    let total = qk.pow(n as u32);
    let mut chart_count = 0;
    let mut mismatches = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let t: Vec<u32> = (0..n)
            .map(|_| {
                let x = (rest % qk) as u32;
                rest /= qk;
                x
            })
            .collect();
        let (lhs, rhs) = chart_point_test_raw(&t, cp, emb);
        if lhs {
            chart_count += 1;
        }
        if lhs != rhs {
            mismatches.push(t);
        }
    }
    Ok(ChartSweep {
        points: total,
        chart_count,
        omega_count: omega_point_count(&cp.ambient, emb),
        mismatches,
    })
}

/// `#Ω(K)`: points of `P^n(K)` on no k-rational hyperplane.
pub fn omega_point_count(ambient: &Ambient, emb: &FieldEmbedding) -> u64 {
    let k = emb.target();
    let width = ambient.width();
    let identity: Vec<Row> = (0..width)
        .map(|i| (0..width).map(|j| u32::from(i == j)).collect())
        .collect();
    linalg::projective_points_of_span(k, &identity)
        .iter()
        .filter(|x| avoids_rational_hyperplanes(ambient, x, emb))
        .count() as u64
}
