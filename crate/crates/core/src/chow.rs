//! Divisor classes on the wonderful blow-up X of P^n.
//!
//! CH¹(X) is free on `h` (the pulled-back hyperplane class) and the
//! exceptional classes `[E_L]` with `codim L >= 2`. Hyperplane divisors are
//! not basis elements; they are always expanded as
//! `[E_H] = h - Σ_{L ⊊ H} [E_L]`.
//!
//! Classes are keyed by lattice index, which follows the canonical subspace
//! order, so iteration and serialization are deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::projspace::{self, Lattice, ProjError, Subspace, SubspacePermutation};

/// Largest lattice on which the duality pullback is computed in full.
pub const SWAP_LATTICE_LIMIT: u64 = 3_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("{0:?} is not a hyperplane")]
    NotHyperplane(Subspace),
    #[error("{0:?} has codimension 1 and is not a basis element")]
    NotBasisElement(Subspace),
    #[error("map does not preserve the flag complex")]
    NotFlagPreserving,
    #[error("classes live on different blow-ups")]
    AmbientMismatch,
    #[error("intersection pairing is only available for surfaces (n = 2), got n = {0}")]
    NotSurface(usize),
    #[error(transparent)]
    Lattice(#[from] ProjError),
}

pub type Result<T> = std::result::Result<T, ChowError>;

/// An element of CH¹(X) in the basis `{h} ∪ {[E_L] : codim L >= 2}`.
#[derive(Clone)]
pub struct DivisorClass {
    lattice: Arc<Lattice>,
    h: i64,
    exceptional: BTreeMap<usize, i64>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.ambient() == other.lattice.ambient()
            && self.h == other.h
            && self.exceptional == other.exceptional
    }
}

impl Eq for DivisorClass {}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}h", self.h)?;
        for (&i, &c) in &self.exceptional {
            write!(f, " {:+}E{:?}", c, self.lattice.get(i))?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entry<'a>(&'a Subspace, i64);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("dim", &self.0.dim())?;
                m.serialize_entry("rref", self.0.forms())?;
                m.serialize_entry("coeff", &self.1)?;
                m.end()
            }
        }
        let entries: Vec<Entry<'_>> = self
            .exceptional
            .iter()
            .map(|(&i, &c)| Entry(self.lattice.get(i), c))
            .collect();
        let mut st = s.serialize_struct("DivisorClass", 2)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("exceptional", &entries)?;
        st.end()
    }
}

impl DivisorClass {
    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Coefficient of `h`.
    pub fn h_coefficient(&self) -> i64 {
        self.h
    }

    /// Coefficient of `[E_L]`; zero for subspaces outside the basis.
    pub fn coefficient(&self, l: &Subspace) -> i64 {
        self.lattice
            .index_of(l)
            .and_then(|i| self.exceptional.get(&i).copied())
            .unwrap_or(0)
    }

    /// Nonzero exceptional coefficients in canonical order.
    pub fn exceptional_terms(&self) -> impl Iterator<Item = (&Subspace, i64)> + '_ {
        self.exceptional
            .iter()
            .map(|(&i, &c)| (self.lattice.get(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.exceptional.is_empty()
    }

    fn check(&self, other: &DivisorClass) -> Result<()> {
        if self.lattice.ambient() != other.lattice.ambient() {
            return Err(ChowError::AmbientMismatch);
        }
        Ok(())
    }

    fn add_term(&mut self, i: usize, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.exceptional.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.exceptional.remove(&i);
        }
    }

    /// `self += scale * other`, same lattice assumed.
    fn axpy(&mut self, scale: i64, other: &DivisorClass) {
        if scale == 0 {
            return;
        }
        self.h += scale * other.h;
        for (&i, &c) in &other.exceptional {
            self.add_term(i, scale * c);
        }
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check(other)?;
        let mut out = self.clone();
        out.axpy(1, other);
        Ok(out)
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check(other)?;
        let mut out = self.clone();
        out.axpy(-1, other);
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        let mut out = DivisorClass {
            lattice: Arc::clone(&self.lattice),
            h: 0,
            exceptional: BTreeMap::new(),
        };
        out.axpy(k, self);
        out
    }
}

/// The image of a class in CH¹(X)/Γ, where Γ is spanned by the exceptional
/// basis classes: the `h` coefficient.
pub fn reduce_mod_gamma(c: &DivisorClass) -> i64 {
    c.h
}

/// CH¹ of the wonderful blow-up of a fixed P^n.
#[derive(Clone)]
pub struct ChowGroup {
    lattice: Arc<Lattice>,
    /// Expansion of `[E_H]` for each hyperplane, by position in the top grade.
    hyperplane_classes: Vec<DivisorClass>,
}

impl fmt::Debug for ChowGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowGroup({:?})", self.lattice)
    }
}

impl ChowGroup {
    pub fn new(lattice: &Arc<Lattice>) -> ChowGroup {
        let top = lattice.ambient().n() - 1;
        let hyperplane_classes = lattice
            .dim_range(top)
            .map(|i| {
                let mut c = DivisorClass {
                    lattice: Arc::clone(lattice),
                    h: 1,
                    exceptional: BTreeMap::new(),
                };
                for j in lattice.below(i) {
                    c.add_term(j, -1);
                }
                c
            })
            .collect();
        ChowGroup {
            lattice: Arc::clone(lattice),
            hyperplane_classes,
        }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.lattice.ambient().n()
    }

    /// Number of basis elements, `1 + #{L : codim L >= 2}`.
    pub fn rank(&self) -> usize {
        1 + self.lattice.len() - self.lattice.hyperplanes().len()
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            h: 0,
            exceptional: BTreeMap::new(),
        }
    }

    pub fn h(&self) -> DivisorClass {
        DivisorClass {
            h: 1,
            ..self.zero()
        }
    }

    /// The basis class `[E_L]`; `L` must have codimension at least 2.
    pub fn exceptional(&self, l: &Subspace) -> Result<DivisorClass> {
        let i = self.index(l)?;
        if l.is_hyperplane() {
            return Err(ChowError::NotBasisElement(l.clone()));
        }
        let mut c = self.zero();
        c.add_term(i, 1);
        Ok(c)
    }

    fn index(&self, l: &Subspace) -> Result<usize> {
        self.lattice
            .index_of(l)
            .ok_or(ChowError::Lattice(ProjError::AmbientMismatch))
    }

    fn is_hyperplane_index(&self, i: usize) -> bool {
        self.lattice.get(i).is_hyperplane()
    }

    fn class_of_index(&self, i: usize) -> DivisorClass {
        if self.is_hyperplane_index(i) {
            let start = self.lattice.dim_range(self.n() - 1).start;
            self.hyperplane_classes[i - start].clone()
        } else {
            let mut c = self.zero();
            c.add_term(i, 1);
            c
        }
    }

    fn add_class_of_index(&self, acc: &mut DivisorClass, scale: i64, i: usize) {
        if self.is_hyperplane_index(i) {
            let start = self.lattice.dim_range(self.n() - 1).start;
            acc.axpy(scale, &self.hyperplane_classes[i - start]);
        } else {
            acc.add_term(i, scale);
        }
    }

    /// `[E_L]` for any nontrivial `L`, expanding hyperplanes.
    pub fn divisor(&self, l: &Subspace) -> Result<DivisorClass> {
        Ok(self.class_of_index(self.index(l)?))
    }

    /// `[E_H] = h - Σ_{L ⊊ H} [E_L]`.
    pub fn hyperplane_class(&self, hyperplane: &Subspace) -> Result<DivisorClass> {
        let i = self.index(hyperplane)?;
        if !hyperplane.is_hyperplane() {
            return Err(ChowError::NotHyperplane(hyperplane.clone()));
        }
        Ok(self.class_of_index(i))
    }

    /// `K_X = -(n+1) h + Σ_L (codim L - 1) [E_L]`.
    pub fn canonical_class(&self) -> DivisorClass {
        let n = self.n() as i64;
        let mut c = self.zero();
        c.h = -(n + 1);
        for i in 0..self.lattice.len() {
            let l = self.lattice.get(i);
            if !l.is_hyperplane() {
                c.add_term(i, l.codim() as i64 - 1);
            }
        }
        c
    }

    fn check_perm(&self, perm: &SubspacePermutation) -> Result<SubspacePermutation> {
        if perm.lattice().ambient() != self.lattice.ambient() {
            return Err(ChowError::AmbientMismatch);
        }
        match projspace::flag_complex_check(perm) {
            Ok(true) => Ok(perm.inverse()?),
            Ok(false) | Err(ProjError::NotBijective) => Err(ChowError::NotFlagPreserving),
            Err(e) => Err(e.into()),
        }
    }

    fn pullback_h(&self, inv: &SubspacePermutation, h_ref: usize) -> DivisorClass {
        let mut out = self.zero();
        self.add_class_of_index(&mut out, 1, inv.image_index(h_ref));
        for j in self.lattice.below(h_ref) {
            self.add_class_of_index(&mut out, 1, inv.image_index(j));
        }
        out
    }

    fn pullback_with(
        &self,
        inv: &SubspacePermutation,
        c: &DivisorClass,
        h_ref: usize,
    ) -> DivisorClass {
        let mut out = self.zero();
        if c.h != 0 {
            out.axpy(c.h, &self.pullback_h(inv, h_ref));
        }
        for (&i, &coeff) in &c.exceptional {
            self.add_class_of_index(&mut out, coeff, inv.image_index(i));
        }
        out
    }

    /// Pullback of `c` along the lattice map `perm`:
    /// `[E_L] ↦ [E_{perm⁻¹(L)}]` and
    /// `h ↦ [E_{perm⁻¹(H)}] + Σ_{L ⊊ H} [E_{perm⁻¹(L)}]` for the reference
    /// hyperplane `H`, all expanded in the basis.
    pub fn pullback(
        &self,
        perm: &SubspacePermutation,
        c: &DivisorClass,
        h_ref: &Subspace,
    ) -> Result<DivisorClass> {
        c.check(&self.zero())?;
        let h_idx = self.index(h_ref)?;
        if !h_ref.is_hyperplane() {
            return Err(ChowError::NotHyperplane(h_ref.clone()));
        }
        let inv = self.check_perm(perm)?;
        Ok(self.pullback_with(&inv, c, h_idx))
    }

    /// Whether the pullback of `h` is the same class for every reference
    /// hyperplane.
    pub fn pullback_well_defined(&self, perm: &SubspacePermutation) -> Result<bool> {
        let inv = self.check_perm(perm)?;
        let mut range = self.lattice.dim_range(self.n() - 1);
        let first = range.next().expect("at least one hyperplane");
        let reference = self.pullback_h(&inv, first);
        Ok(range.all(|i| self.pullback_h(&inv, i) == reference))
    }

    /// Pullback of `h` modulo Γ, over every reference hyperplane.
    pub fn pullback_h_mod_gamma(&self, perm: &SubspacePermutation) -> Result<Vec<i64>> {
        let inv = self.check_perm(perm)?;
        Ok(self
            .lattice
            .dim_range(self.n() - 1)
            .map(|i| reduce_mod_gamma(&self.pullback_h(&inv, i)))
            .collect())
    }
}

/// A class on the blown-up plane, `h`-part plus point exceptional divisors.
#[derive(Clone, PartialEq, Eq)]
pub struct SurfaceClass(DivisorClass);

impl fmt::Debug for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl TryFrom<DivisorClass> for SurfaceClass {
    type Error = ChowError;

    fn try_from(c: DivisorClass) -> Result<SurfaceClass> {
        match c.lattice.ambient().n() {
            2 => Ok(SurfaceClass(c)),
            n => Err(ChowError::NotSurface(n)),
        }
    }
}

impl SurfaceClass {
    pub fn class(&self) -> &DivisorClass {
        &self.0
    }
}

/// Intersection pairing on the blown-up plane:
/// `h·h = 1`, `h·E_p = 0`, `E_p·E_p' = -δ_{pp'}`.
pub fn surface_intersection(a: &SurfaceClass, b: &SurfaceClass) -> Result<i64> {
    a.0.check(&b.0)?;
    let mut total = a.0.h * b.0.h;
    for (i, &x) in &a.0.exceptional {
        if let Some(&y) = b.0.exceptional.get(i) {
            total -= x * y;
        }
    }
    Ok(total)
}

/// Outcome of the duality pullback of the canonical class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityRoute {
    /// `K_X mod Γ`, i.e. `-(n+1)`.
    pub canonical_mod_gamma: i64,
    /// `δ* K_X mod Γ` via the standard correlation.
    pub pullback_mod_gamma: i64,
    /// `-(n+1)·#P^{n-1} + (n-1)·#P^n`.
    pub predicted_mod_gamma: i64,
    pub mismatch: bool,
    /// Identity pullback reproduces `K_X` exactly.
    pub identity_fixes_canonical: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapReport {
    pub n: u64,
    pub q: u64,
    pub applicable: bool,
    /// `(n+1)(q^n - q)`.
    #[serde(serialize_with = "crate::serialize_big")]
    pub lhs: BigInt,
    /// `(n-1)(q^{n+1} - 1)`.
    #[serde(serialize_with = "crate::serialize_big")]
    pub rhs: BigInt,
    pub identity_holds: bool,
    pub duality: Option<DualityRoute>,
    pub duality_skipped: Option<String>,
}

impl SwapReport {
    /// A point/hyperplane swap is ruled out by every route that ran.
    pub fn ruled_out(&self) -> bool {
        self.applicable && !self.identity_holds && self.duality.as_ref().is_none_or(|d| d.mismatch)
    }
}

/// Runs the duality route on an explicit lattice.
pub fn duality_route(lattice: &Arc<Lattice>) -> Result<DualityRoute> {
    let chow = ChowGroup::new(lattice);
    let n = chow.n();
    let k = chow.canonical_class();
    let h_ref = lattice.hyperplanes()[0].clone();
    let delta = lattice.duality();
    let pulled = chow.pullback(&delta, &k, &h_ref)?;
    let id = SubspacePermutation::identity(lattice);
    let fixed = chow.pullback(&id, &k, &h_ref)? == k;
    let q = lattice.ambient().q() as u64;
    let pts = |t: u64| -> i64 {
        i64::try_from(crate::counting::projective_points(t, q)).expect("desk-scale count")
    };
    let ni = n as i64;
    let predicted = -(ni + 1) * pts(n as u64 - 1) + (ni - 1) * pts(n as u64);
    Ok(DualityRoute {
        canonical_mod_gamma: reduce_mod_gamma(&k),
        pullback_mod_gamma: reduce_mod_gamma(&pulled),
        predicted_mod_gamma: predicted,
        mismatch: reduce_mod_gamma(&pulled) != reduce_mod_gamma(&k),
        identity_fixes_canonical: fixed,
    })
}

/// Both routes showing that no flag-complex automorphism can swap points and
/// hyperplanes while fixing the canonical class.
pub fn swap_impossibility(n: u64, q: u64) -> Result<SwapReport> {
    let qb = BigInt::from(q);
    let nb = BigInt::from(n);
    let lhs = (&nb + 1) * (qb.pow(n as u32) - &qb);
    let rhs = (&nb - 1) * (qb.pow(n as u32 + 1) - 1);
    let identity_holds = lhs == rhs;
    if n < 2 {
        return Ok(SwapReport {
            n,
            q,
            applicable: false,
            lhs,
            rhs,
            identity_holds,
            duality: None,
            duality_skipped: Some("points and hyperplanes coincide for n = 1".into()),
        });
    }
    let total: BigInt = (0..n)
        .map(|d| BigInt::from(crate::counting::gaussian_count(n, d, q)))
        .sum();
    let (duality, duality_skipped) = if total <= BigInt::from(SWAP_LATTICE_LIMIT) {
        let lattice = Arc::new(Lattice::for_params(q, n as usize)?);
        (Some(duality_route(&lattice)?), None)
    } else {
        (
            None,
            Some(format!(
                "lattice has {total} subspaces, above the limit of {SWAP_LATTICE_LIMIT}"
            )),
        )
    };
    Ok(SwapReport {
        n,
        q,
        applicable: true,
        lhs,
        rhs,
        identity_holds,
        duality,
        duality_skipped,
    })
}

impl Serialize for ChowGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("n", &self.n())?;
        m.serialize_entry("q", &self.lattice.ambient().q())?;
        m.serialize_entry("rank", &self.rank())?;
        m.end()
    }
}
