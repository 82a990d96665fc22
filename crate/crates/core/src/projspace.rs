//! The lattice of nontrivial k-rational linear subspaces of P^n over GF(q).
//!
//! A subspace `L` is stored dually, by the space `W` of linear forms
//! vanishing on it, as a reduced row-echelon matrix with `n - dim L` rows and
//! `n + 1` columns. Containment `L ⊆ L'` is then `W' ⊆ W`, and "`L` lies on
//! the hyperplane `Z(v)`" is `v ∈ W`.
//!
//! Points of P^n are column vectors `x`; a form `v` vanishes at `x` when
//! `v · x = 0`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::counting;
use crate::gf::{Field, GfError};
use crate::linalg::{self, Row};

/// Refuse any single-dimension enumeration larger than this.
pub const SUBSPACE_BUDGET: u64 = 1_000_000;
/// Refuse flag enumerations producing more than this many flags.
pub const FLAG_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("subspaces belong to different ambient spaces")]
    AmbientMismatch,
    #[error("enumeration of {count} items exceeds the budget of {limit}")]
    BudgetExceeded { count: u64, limit: u64 },
    #[error("map is not a bijection of the subspace lattice")]
    NotBijective,
    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("invalid ambient dimension {0}")]
    InvalidDimension(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, ProjError>;

/// P^n over a field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ambient {
    n: usize,
    field: Field,
}

impl fmt::Debug for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{}({})", self.n, self.field)
    }
}

impl Ambient {
    pub fn new(n: usize, field: Field) -> Result<Ambient> {
        if n == 0 {
            return Err(ProjError::InvalidDimension(n));
        }
        Ok(Ambient { n, field })
    }

    /// Projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Vector length, `n + 1`.
    pub fn width(&self) -> usize {
        self.n + 1
    }

    fn check(&self, other: &Ambient) -> Result<()> {
        if self != other {
            return Err(ProjError::AmbientMismatch);
        }
        Ok(())
    }

    fn check_vector(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.width() {
            return Err(ProjError::InvalidSubspace(format!(
                "vector of length {} in {:?}",
                v.len(),
                self
            )));
        }
        if let Some(&x) = v.iter().find(|&&x| x >= self.q()) {
            return Err(GfError::OutOfRange {
                value: x as u64,
                q: self.q(),
            }
            .into());
        }
        Ok(())
    }

    /// Coordinate form `e_i`.
    pub fn coordinate_form(&self, i: usize) -> LinearForm {
        let mut coeffs = vec![0; self.width()];
        coeffs[i] = 1;
        LinearForm {
            ambient: self.clone(),
            coeffs,
        }
    }

    /// All normalized nonzero forms, sorted; there are `#P^n(k)` of them.
    pub fn all_forms(&self) -> Vec<LinearForm> {
        let identity: Vec<Row> = (0..self.width())
            .map(|i| (0..self.width()).map(|j| u32::from(i == j)).collect())
            .collect();
        linalg::projective_points_of_span(&self.field, &identity)
            .into_iter()
            .map(|coeffs| LinearForm {
                ambient: self.clone(),
                coeffs,
            })
            .collect()
    }
}

/// A nonzero linear form up to scaling: first nonzero coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    ambient: Ambient,
    coeffs: Row,
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl LinearForm {
    pub fn new(ambient: &Ambient, coeffs: &[u32]) -> Result<LinearForm> {
        ambient.check_vector(coeffs)?;
        if coeffs.iter().all(|&c| c == 0) {
            return Err(ProjError::InvalidSubspace("zero linear form".into()));
        }
        Ok(LinearForm {
            ambient: ambient.clone(),
            coeffs: linalg::normalize(&ambient.field, coeffs),
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    /// The hyperplane `Z(v)`.
    pub fn hyperplane(&self) -> Subspace {
        Subspace::from_rref(&self.ambient, vec![self.coeffs.clone()])
    }

    /// Value at a point given by coordinates.
    pub fn eval(&self, x: &[u32]) -> u32 {
        linalg::dot(&self.ambient.field, &self.coeffs, x)
    }
}

/// A nontrivial linear subspace `L = Z(W)` of P^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: Ambient,
    dim: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: dimension, then the RREF entries.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.ambient.n.cmp(&other.ambient.n))
            .then_with(|| self.ambient.q().cmp(&other.ambient.q()))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}{:?}", self.dim, self.rows)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Subspace", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("rref", &self.rows)?;
        st.end()
    }
}

/// Result of a meet or join, which may leave the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Linear {
    Empty,
    Proper(Subspace),
    Whole,
}

impl Linear {
    pub fn proper(self) -> Option<Subspace> {
        match self {
            Linear::Proper(s) => Some(s),
            _ => None,
        }
    }
}

impl Subspace {
    /// Trusted constructor: rows must already be a reduced echelon basis.
    fn from_rref(ambient: &Ambient, rows: Vec<Row>) -> Subspace {
        let pivots = rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect();
        Subspace {
            ambient: ambient.clone(),
            dim: ambient.n - rows.len(),
            rows,
            pivots,
        }
    }

    fn classify(ambient: &Ambient, rows: Vec<Row>) -> Linear {
        match rows.len() {
            0 => Linear::Whole,
            k if k == ambient.width() => Linear::Empty,
            _ => Linear::Proper(Subspace::from_rref(ambient, rows)),
        }
    }

    /// Zero locus of the given forms.
    pub fn zero_locus(ambient: &Ambient, forms: &[Row]) -> Result<Linear> {
        for f in forms {
            ambient.check_vector(f)?;
        }
        let (rows, _) = linalg::rref(&ambient.field, forms);
        Ok(Subspace::classify(ambient, rows))
    }

    /// Like [`Subspace::zero_locus`], but rejects trivial results.
    pub fn from_forms(ambient: &Ambient, forms: &[Row]) -> Result<Subspace> {
        Subspace::zero_locus(ambient, forms)?
            .proper()
            .ok_or_else(|| {
                ProjError::InvalidSubspace("forms cut out the empty set or everything".into())
            })
    }

    /// Projective span of the given points.
    pub fn span_of_points(ambient: &Ambient, points: &[Row]) -> Result<Linear> {
        for p in points {
            ambient.check_vector(p)?;
        }
        let w = linalg::nullspace(&ambient.field, points, ambient.width());
        if points.iter().all(|p| p.iter().all(|&x| x == 0)) {
            return Ok(Linear::Empty);
        }
        Ok(Subspace::classify(ambient, w))
    }

    pub fn point(ambient: &Ambient, coords: &[u32]) -> Result<Subspace> {
        if coords.iter().all(|&x| x == 0) {
            return Err(ProjError::InvalidSubspace("zero point".into()));
        }
        Subspace::span_of_points(ambient, &[coords.to_vec()])?
            .proper()
            .ok_or_else(|| ProjError::InvalidSubspace("point fills the ambient space".into()))
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.ambient.n - self.dim
    }

    pub fn is_hyperplane(&self) -> bool {
        self.codim() == 1
    }

    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    /// Reduced row-echelon basis of the vanishing forms.
    pub fn forms(&self) -> &[Row] {
        &self.rows
    }

    /// Does the form `v` vanish on this subspace?
    pub fn contains_form(&self, v: &[u32]) -> bool {
        linalg::in_span(&self.ambient.field, &self.rows, &self.pivots, v)
    }

    /// `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Subspace) -> Result<bool> {
        self.ambient.check(&other.ambient)?;
        Ok(self.contained_unchecked(other))
    }

    fn contained_unchecked(&self, other: &Subspace) -> bool {
        other.dim >= self.dim && other.rows.iter().all(|r| self.contains_form(r))
    }

    pub fn is_comparable(&self, other: &Subspace) -> Result<bool> {
        Ok(self.is_contained_in(other)? || other.is_contained_in(self)?)
    }

    /// Basis (RREF) of the vectors spanning the cone over this subspace.
    pub fn point_basis(&self) -> Vec<Row> {
        linalg::nullspace(&self.ambient.field, &self.rows, self.ambient.width())
    }

    /// Normalized coordinates of all k-rational points, sorted.
    pub fn points(&self) -> Vec<Row> {
        linalg::projective_points_of_span(&self.ambient.field, &self.point_basis())
    }

    /// Coordinates of a point subspace.
    pub fn point_coords(&self) -> Option<Row> {
        (self.dim == 0).then(|| linalg::normalize(&self.ambient.field, &self.point_basis()[0]))
    }

    /// `L ∩ L'`, i.e. `Z(W + W')`.
    pub fn meet(&self, other: &Subspace) -> Result<Linear> {
        self.ambient.check(&other.ambient)?;
        let stacked: Vec<Row> = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::zero_locus(&self.ambient, &stacked)
    }

    /// Span of `L ∪ L'`, i.e. `Z(W ∩ W')`.
    pub fn join(&self, other: &Subspace) -> Result<Linear> {
        self.ambient.check(&other.ambient)?;
        let pts: Vec<Row> = self
            .point_basis()
            .into_iter()
            .chain(other.point_basis())
            .collect();
        Subspace::span_of_points(&self.ambient, &pts)
    }

    /// Image under the standard correlation `W ↦ W^⊥`; reverses inclusion
    /// and sends dimension `d` to `n - 1 - d`.
    pub fn dual(&self) -> Subspace {
        Subspace::from_rref(&self.ambient, self.point_basis())
    }

    /// All hyperplanes containing this subspace, sorted.
    pub fn hyperplanes_containing(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> =
            linalg::projective_points_of_span(&self.ambient.field, &self.rows)
                .into_iter()
                .map(|v| Subspace::from_rref(&self.ambient, vec![v]))
                .collect();
        out.sort();
        out
    }

    /// Normalized forms vanishing on this subspace, sorted.
    pub fn vanishing_forms(&self) -> Vec<Row> {
        linalg::projective_points_of_span(&self.ambient.field, &self.rows)
    }

    /// Re-derives the canonical matrix from the stored one.
    pub fn recanonicalize(&self) -> Subspace {
        let (rows, _) = linalg::rref(&self.ambient.field, &self.rows);
        Subspace::from_rref(&self.ambient, rows)
    }
}

/// `small ⊆ big`.
pub fn contains(small: &Subspace, big: &Subspace) -> Result<bool> {
    small.is_contained_in(big)
}

pub fn meet(a: &Subspace, b: &Subspace) -> Result<Linear> {
    a.meet(b)
}

pub fn join(a: &Subspace, b: &Subspace) -> Result<Linear> {
    a.join(b)
}

pub fn hyperplanes_containing(l: &Subspace) -> Vec<Subspace> {
    l.hyperplanes_containing()
}

fn check_budget(ambient: &Ambient, d: usize) -> Result<u64> {
    let count = counting::gaussian_count(ambient.n as u64, d as u64, ambient.q() as u64);
    let limit = SUBSPACE_BUDGET;
    match u64::try_from(&count) {
        Ok(c) if c <= limit => Ok(c),
        Ok(c) => Err(ProjError::BudgetExceeded { count: c, limit }),
        Err(_) => Err(ProjError::BudgetExceeded {
            count: u64::MAX,
            limit,
        }),
    }
}

/// All subspaces of dimension `d`, in canonical order.
pub fn enumerate_subspaces(ambient: &Ambient, d: usize) -> Result<Vec<Subspace>> {
    if d >= ambient.n {
        return Err(ProjError::InvalidSubspace(format!(
            "dimension {d} is not a proper dimension of P^{}",
            ambient.n
        )));
    }
    check_budget(ambient, d)?;
    let width = ambient.width();
    let k = ambient.n - d;
    let q = ambient.q();
    let mut out = Vec::new();
    for pivots in combinations(width, k) {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                ((pivots[r] + 1)..width)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut values = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; width]; k];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&values) {
                rows[r][c] = v;
            }
            out.push(Subspace::from_rref(ambient, rows));
            // odometer
            let mut i = 0;
            while i < values.len() {
                values[i] += 1;
                if values[i] < q {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == values.len() {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A nonempty chain `L_0 ⊊ L_1 ⊊ ...` of subspaces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Flag {
    members: Vec<Subspace>,
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.members).finish()
    }
}

impl Flag {
    /// Sorts by dimension and checks strict containment.
    pub fn new(mut members: Vec<Subspace>) -> Result<Flag> {
        let Some(first) = members.first() else {
            return Err(ProjError::InvalidFlag("empty".into()));
        };
        let n = first.ambient.n;
        if members.len() > n {
            return Err(ProjError::InvalidFlag(format!(
                "length {} > {n}",
                members.len()
            )));
        }
        members.sort();
        for pair in members.windows(2) {
            if pair[0].dim == pair[1].dim || !pair[0].is_contained_in(&pair[1])? {
                return Err(ProjError::InvalidFlag(format!(
                    "{:?} is not strictly contained in {:?}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Flag { members })
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ambient(&self) -> &Ambient {
        &self.members[0].ambient
    }

    pub fn contains(&self, l: &Subspace) -> bool {
        self.members.binary_search(l).is_ok()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.dim).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.members.len() == self.ambient().n
    }

    pub fn member_of_dim(&self, d: usize) -> Option<&Subspace> {
        self.members.iter().find(|m| m.dim == d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagType {
    /// Flags whose dimension set is exactly this.
    Dims(BTreeSet<usize>),
    Complete,
    All,
}

/// Every nontrivial subspace of P^n with its incidence data.
pub struct Lattice {
    ambient: Ambient,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    ranges: Vec<Range<usize>>,
    above: OnceLock<Vec<Vec<usize>>>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Lattice({:?}, {} subspaces)",
            self.ambient,
            self.subspaces.len()
        )
    }
}

impl Lattice {
    pub fn new(ambient: &Ambient) -> Result<Lattice> {
        for d in 0..ambient.n {
            check_budget(ambient, d)?;
        }
        let mut subspaces = Vec::new();
        let mut ranges = Vec::new();
        for d in 0..ambient.n {
            let start = subspaces.len();
            subspaces.extend(enumerate_subspaces(ambient, d)?);
            ranges.push(start..subspaces.len());
        }
        let index = subspaces
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Lattice {
            ambient: ambient.clone(),
            subspaces,
            index,
            ranges,
            above: OnceLock::new(),
        })
    }

    pub fn for_params(q: u64, n: usize) -> Result<Lattice> {
        Lattice::new(&Ambient::new(n, Field::with_order(q)?)?)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index range of the subspaces of dimension `d`.
    pub fn dim_range(&self, d: usize) -> Range<usize> {
        self.ranges[d].clone()
    }

    pub fn of_dim(&self, d: usize) -> &[Subspace] {
        &self.subspaces[self.ranges[d].clone()]
    }

    pub fn points(&self) -> &[Subspace] {
        self.of_dim(0)
    }

    pub fn hyperplanes(&self) -> &[Subspace] {
        self.of_dim(self.ambient.n - 1)
    }

    /// For each subspace, the sorted indices of subspaces strictly above it.
    pub fn above(&self) -> &[Vec<usize>] {
        self.above.get_or_init(|| {
            (0..self.len())
                .into_par_iter()
                .map(|i| {
                    let s = &self.subspaces[i];
                    ((s.dim + 1)..self.ambient.n)
                        .flat_map(|d| self.ranges[d].clone())
                        .filter(|&j| s.contained_unchecked(&self.subspaces[j]))
                        .collect()
                })
                .collect()
        })
    }

    /// `subspaces[i] ⊆ subspaces[j]`.
    pub fn contained(&self, i: usize, j: usize) -> bool {
        i == j || self.above()[i].binary_search(&j).is_ok()
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.contained(i, j) || self.contained(j, i)
    }

    /// Indices of subspaces strictly contained in `subspaces[i]`.
    pub fn below(&self, i: usize) -> Vec<usize> {
        let s = &self.subspaces[i];
        (0..s.dim)
            .flat_map(|d| self.ranges[d].clone())
            .filter(|&j| self.contained(j, i))
            .collect()
    }

    pub fn enumerate_flags(&self, kind: &FlagType) -> Result<Vec<Flag>> {
        let n = self.ambient.n;
        let allowed: BTreeSet<usize> = match kind {
            FlagType::Dims(d) => {
                if let Some(&bad) = d.iter().find(|&&x| x >= n) {
                    return Err(ProjError::InvalidFlag(format!(
                        "dimension {bad} out of range"
                    )));
                }
                d.clone()
            }
            FlagType::Complete => (0..n).collect(),
            FlagType::All => (0..n).collect(),
        };
        let exact = !matches!(kind, FlagType::All);
        if allowed.is_empty() {
            return Ok(Vec::new());
        }
        let above = self.above();
        let mut out = Vec::new();
        let mut chain = Vec::new();
        let starts: Vec<usize> = if exact {
            self.ranges[*allowed.first().unwrap()].clone().collect()
        } else {
            (0..self.len()).collect()
        };
        for s in starts {
            chain.push(s);
            self.extend_chains(&mut chain, &allowed, exact, above, &mut out)?;
            chain.pop();
        }
        out.sort();
        Ok(out)
    }

    fn extend_chains(
        &self,
        chain: &mut Vec<usize>,
        allowed: &BTreeSet<usize>,
        exact: bool,
        above: &[Vec<usize>],
        out: &mut Vec<Flag>,
    ) -> Result<()> {
        let top = *chain.last().unwrap();
        let top_dim = self.subspaces[top].dim;
        let next_dim = allowed.range(top_dim + 1..).next().copied();
        if !exact || next_dim.is_none() {
            if out.len() as u64 >= FLAG_BUDGET {
                return Err(ProjError::BudgetExceeded {
                    count: out.len() as u64 + 1,
                    limit: FLAG_BUDGET,
                });
            }
            out.push(Flag {
                members: chain.iter().map(|&i| self.subspaces[i].clone()).collect(),
            });
        }
        for &j in &above[top] {
            let d = self.subspaces[j].dim;
            if (exact && Some(d) != next_dim) || !allowed.contains(&d) {
                continue;
            }
            chain.push(j);
            self.extend_chains(chain, allowed, exact, above, out)?;
            chain.pop();
        }
        Ok(())
    }

    /// The standard correlation as a lattice permutation.
    pub fn duality(self: &Arc<Self>) -> SubspacePermutation {
        let images = self
            .subspaces
            .iter()
            .map(|s| self.index_of(&s.dual()).expect("dual is in the lattice"))
            .collect();
        SubspacePermutation {
            lattice: Arc::clone(self),
            images,
        }
    }
}

pub fn enumerate_flags(ambient: &Ambient, kind: &FlagType) -> Result<Vec<Flag>> {
    Lattice::new(ambient)?.enumerate_flags(kind)
}

/// A map from the lattice to itself, stored by index.
#[derive(Clone)]
pub struct SubspacePermutation {
    lattice: Arc<Lattice>,
    images: Vec<usize>,
}

impl fmt::Debug for SubspacePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubspacePermutation({:?})", self.images)
    }
}

impl PartialEq for SubspacePermutation {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.ambient == other.lattice.ambient && self.images == other.images
    }
}

impl Eq for SubspacePermutation {}

impl SubspacePermutation {
    pub fn identity(lattice: &Arc<Lattice>) -> SubspacePermutation {
        SubspacePermutation {
            lattice: Arc::clone(lattice),
            images: (0..lattice.len()).collect(),
        }
    }

    /// Wraps raw images. Length must match; bijectivity is checked by
    /// [`flag_complex_check`].
    pub fn from_images(lattice: &Arc<Lattice>, images: Vec<usize>) -> Result<SubspacePermutation> {
        if images.len() != lattice.len() || images.iter().any(|&i| i >= lattice.len()) {
            return Err(ProjError::NotBijective);
        }
        Ok(SubspacePermutation {
            lattice: Arc::clone(lattice),
            images,
        })
    }

    pub fn from_fn<F>(lattice: &Arc<Lattice>, mut f: F) -> Result<SubspacePermutation>
    where
        F: FnMut(&Subspace) -> Result<Subspace>,
    {
        let images = lattice
            .subspaces
            .iter()
            .map(|s| {
                let img = f(s)?;
                lattice.index_of(&img).ok_or(ProjError::AmbientMismatch)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspacePermutation {
            lattice: Arc::clone(lattice),
            images,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply(&self, s: &Subspace) -> Result<&Subspace> {
        let i = self.lattice.index_of(s).ok_or(ProjError::AmbientMismatch)?;
        Ok(self.lattice.get(self.images[i]))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    pub fn inverse(&self) -> Result<SubspacePermutation> {
        if !self.is_bijective() {
            return Err(ProjError::NotBijective);
        }
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Ok(SubspacePermutation {
            lattice: Arc::clone(&self.lattice),
            images: inv,
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SubspacePermutation) -> Result<SubspacePermutation> {
        if self.lattice.ambient != other.lattice.ambient {
            return Err(ProjError::AmbientMismatch);
        }
        Ok(SubspacePermutation {
            lattice: Arc::clone(&self.lattice),
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Every subspace keeps its dimension.
    pub fn preserves_dimension(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| self.lattice.subspaces[i].dim == self.lattice.subspaces[j].dim)
    }

    /// Every subspace of dimension `d` goes to dimension `n - 1 - d`.
    pub fn reverses_dimension(&self) -> bool {
        let n = self.lattice.ambient.n;
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| self.lattice.subspaces[i].dim + self.lattice.subspaces[j].dim == n - 1)
    }
}

/// Whether a bijection of the lattice maps flags to flags.
///
/// Only the forward direction is tested: a bijection sends distinct
/// comparable pairs to distinct comparable pairs, and there are finitely many,
/// so incomparable pairs cannot become comparable.
pub fn flag_complex_check(perm: &SubspacePermutation) -> Result<bool> {
    if !perm.is_bijective() {
        return Err(ProjError::NotBijective);
    }
    let lat = &perm.lattice;
    let above = lat.above();
    Ok((0..lat.len()).into_par_iter().all(|i| {
        let pi = perm.images[i];
        above[i].iter().all(|&j| lat.comparable(pi, perm.images[j]))
    }))
}
