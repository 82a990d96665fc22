//! Projective-linear maps acting on the subspace lattice, an exhaustive
//! search for incidence-preserving bijections, and reconstruction of a matrix
//! from a permutation of points.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{self, Row};
use crate::projspace::{
    flag_complex_check, Ambient, Lattice, Linear, ProjError, Subspace, SubspacePermutation,
};

/// Default node cap for [`collineation_search`].
pub const SEARCH_BUDGET: u64 = 50_000_000;
/// Largest number of matrices [`enumerate_pgl`] will scan.
pub const MATRIX_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("objects belong to different ambient spaces")]
    AmbientMismatch,
    #[error("matrix has the wrong shape for this ambient space")]
    InvalidMatrix,
    #[error("matrix is singular")]
    NotInvertible,
    #[error("search budget exceeded: {count} > {limit}")]
    BudgetExceeded { count: u64, limit: u64 },
    #[error("{0} points exceed the 128-point search limit")]
    TooManyPoints(usize),
    #[error("the point map is not a bijection")]
    NotBijective,
    #[error("the point map does not preserve collinearity")]
    NotCollinearityPreserving,
    #[error("the point map is not induced by a projective-linear map")]
    NotRealizable,
    #[error(transparent)]
    Lattice(#[from] ProjError),
}

pub type Result<T> = std::result::Result<T, AutError>;

/// An element of PGL(n+1, q), scaled so the first nonzero entry is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMap {
    matrix: Vec<Row>,
    inverse: Vec<Row>,
    ambient: AmbientKey,
}

/// Ordering key so maps sort by matrix first.
#[derive(Clone, PartialEq, Eq, Hash)]
struct AmbientKey(Ambient);

impl PartialOrd for AmbientKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AmbientKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.n(), self.0.q()).cmp(&(other.0.n(), other.0.q()))
    }
}

impl fmt::Debug for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectiveMap({:?})", self.matrix)
    }
}

impl Serialize for ProjectiveMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

fn canonical_scale(field: &Field, m: &[Row]) -> Vec<Row> {
    let lead = m.iter().flatten().copied().find(|&x| x != 0).unwrap_or(1);
    let inv = field.inv(lead).expect("nonzero lead");
    m.iter()
        .map(|r| r.iter().map(|&x| field.mul(x, inv)).collect())
        .collect()
}

impl ProjectiveMap {
    pub fn new(ambient: &Ambient, matrix: Vec<Row>) -> Result<ProjectiveMap> {
        let w = ambient.width();
        let q = ambient.q();
        if matrix.len() != w
            || matrix
                .iter()
                .any(|r| r.len() != w || r.iter().any(|&x| x >= q))
        {
            return Err(AutError::InvalidMatrix);
        }
        let field = ambient.field();
        let inverse = linalg::invert(field, &matrix).ok_or(AutError::NotInvertible)?;
        Ok(ProjectiveMap {
            matrix: canonical_scale(field, &matrix),
            inverse: canonical_scale(field, &inverse),
            ambient: AmbientKey(ambient.clone()),
        })
    }

    pub fn identity(ambient: &Ambient) -> ProjectiveMap {
        let w = ambient.width();
        let id: Vec<Row> = (0..w)
            .map(|i| (0..w).map(|j| u32::from(i == j)).collect())
            .collect();
        ProjectiveMap::new(ambient, id).expect("identity is invertible")
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient.0
    }

    pub fn matrix(&self) -> &[Row] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == u32::from(i == j)))
    }

    /// `self · other`: apply `other` first.
    pub fn compose(&self, other: &ProjectiveMap) -> Result<ProjectiveMap> {
        if self.ambient != other.ambient {
            return Err(AutError::AmbientMismatch);
        }
        let m = linalg::mat_mul(self.ambient().field(), &self.matrix, &other.matrix);
        ProjectiveMap::new(self.ambient(), m)
    }

    pub fn inverse(&self) -> ProjectiveMap {
        ProjectiveMap {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            ambient: self.ambient.clone(),
        }
    }

    /// Image of a point given by coordinates, normalized.
    pub fn apply_point(&self, x: &[u32]) -> Row {
        let field = self.ambient().field();
        linalg::normalize(field, &linalg::mat_vec(field, &self.matrix, x))
    }
}

/// Image of `L`: its form space `W` becomes `W·g⁻¹`, so points go to `g·x`.
pub fn act(g: &ProjectiveMap, l: &Subspace) -> Result<Subspace> {
    if l.ambient() != g.ambient() {
        return Err(AutError::AmbientMismatch);
    }
    let field = g.ambient().field();
    let rows: Vec<Row> = l
        .forms()
        .iter()
        .map(|w| linalg::vec_mat(field, w, &g.inverse))
        .collect();
    Ok(Subspace::from_forms(g.ambient(), &rows)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Grading {
    Preserving,
    Reversing,
}

/// A lattice bijection that maps flags to flags and either keeps or
/// reverses dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPermutation {
    perm: SubspacePermutation,
    mode: Grading,
}

impl Serialize for GradedPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            mode: Grading,
            images: &'a [usize],
        }
        Repr {
            mode: self.mode,
            images: self.perm.images(),
        }
        .serialize(s)
    }
}

impl GradedPermutation {
    /// Validates the grading and the flag condition.
    pub fn new(perm: SubspacePermutation) -> Result<GradedPermutation> {
        let mode = if perm.preserves_dimension() {
            Grading::Preserving
        } else if perm.reverses_dimension() {
            Grading::Reversing
        } else {
            return Err(AutError::NotCollinearityPreserving);
        };
        if !flag_complex_check(&perm)? {
            return Err(AutError::NotCollinearityPreserving);
        }
        Ok(GradedPermutation { perm, mode })
    }

    pub fn permutation(&self) -> &SubspacePermutation {
        &self.perm
    }

    pub fn mode(&self) -> Grading {
        self.mode
    }

    /// Images of the points, as point indices.
    pub fn point_images(&self) -> Vec<usize> {
        let lat = self.perm.lattice();
        lat.dim_range(0).map(|i| self.perm.image_index(i)).collect()
    }

    pub fn into_permutation(self) -> SubspacePermutation {
        self.perm
    }
}

pub fn induced_permutation(lattice: &Arc<Lattice>, g: &ProjectiveMap) -> Result<GradedPermutation> {
    if lattice.ambient() != g.ambient() {
        return Err(AutError::AmbientMismatch);
    }
    let perm = SubspacePermutation::from_fn(lattice, |s| {
        act(g, s).map_err(|e| match e {
            AutError::Lattice(p) => p,
            _ => ProjError::AmbientMismatch,
        })
    })?;
    GradedPermutation::new(perm)
}

pub use crate::counting::pgl_order;

/// Every element of PGL(n+1, q), sorted by matrix.
pub fn enumerate_pgl(ambient: &Ambient) -> Result<Vec<ProjectiveMap>> {
    let w = ambient.width();
    let q = u64::from(ambient.q());
    let cells = (w * w) as u32;
    let total =
        q.checked_pow(cells)
            .filter(|&t| t <= MATRIX_BUDGET)
            .ok_or(AutError::BudgetExceeded {
                count: q.saturating_pow(cells),
                limit: MATRIX_BUDGET,
            })?;
    let mut maps: Vec<ProjectiveMap> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut rest = code;
            let mut flat = vec![0u32; w * w];
            // row-major, first cell most significant
            for x in flat.iter_mut().rev() {
                *x = (rest % q) as u32;
                rest /= q;
            }
            if flat.iter().find(|&&x| x != 0) != Some(&1) {
                return None;
            }
            let m: Vec<Row> = flat.chunks(w).map(<[u32]>::to_vec).collect();
            ProjectiveMap::new(ambient, m).ok()
        })
        .collect();
    maps.sort();
    Ok(maps)
}

/// Point/line incidence in bitmask form.
struct Incidence {
    npoints: usize,
    coords: Vec<Row>,
    line_masks: Vec<u128>,
    /// `line_of[a * npoints + b]` for `a != b`.
    line_of: Vec<usize>,
}

impl Incidence {
    fn new(lattice: &Lattice) -> Result<Incidence> {
        let npoints = lattice.points().len();
        if npoints > 128 {
            return Err(AutError::TooManyPoints(npoints));
        }
        let coords: Vec<Row> = lattice
            .points()
            .iter()
            .map(|p| p.point_coords().expect("dimension 0"))
            .collect();
        let mut line_masks = Vec::new();
        let mut line_of = vec![usize::MAX; npoints * npoints];
        if lattice.ambient().n() >= 2 {
            let above = lattice.above();
            let lines = lattice.dim_range(1);
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];
            for (p, up) in above.iter().enumerate().take(npoints) {
                for &j in up {
                    if lines.contains(&j) {
                        members[j - lines.start].push(p);
                    }
                }
            }
            for (li, pts) in members.iter().enumerate() {
                line_masks.push(pts.iter().fold(0u128, |m, &p| m | (1u128 << p)));
                for &a in pts {
                    for &b in pts {
                        if a != b {
                            line_of[a * npoints + b] = li;
                        }
                    }
                }
            }
        }
        Ok(Incidence {
            npoints,
            coords,
            line_masks,
            line_of,
        })
    }

    fn full_mask(&self) -> u128 {
        if self.npoints == 128 {
            u128::MAX
        } else {
            (1u128 << self.npoints) - 1
        }
    }
}

struct Search<'a> {
    inc: &'a Incidence,
    order_hint: Vec<usize>,
    nodes: &'a AtomicU64,
    limit: u64,
}

#[derive(Clone)]
struct State {
    img: Vec<Option<usize>>,
    domains: Vec<u128>,
}

impl Search<'_> {
    /// Assigns `p ↦ t` with forward checking; `None` on a wipe-out.
    fn assign(&self, st: &State, p: usize, t: usize) -> Option<State> {
        let inc = self.inc;
        let mut next = st.clone();
        next.img[p] = Some(t);
        next.domains[p] = 1u128 << t;
        for x in 0..inc.npoints {
            if next.img[x].is_none() {
                next.domains[x] &= !(1u128 << t);
            }
        }
        if !inc.line_masks.is_empty() {
            for a in 0..inc.npoints {
                let Some(ta) = st.img[a] else { continue };
                let line = inc.line_of[p * inc.npoints + a];
                let image_line = inc.line_of[t * inc.npoints + ta];
                let (lm, im) = (inc.line_masks[line], inc.line_masks[image_line]);
                for x in 0..inc.npoints {
                    if next.img[x].is_some() {
                        continue;
                    }
                    if lm >> x & 1 == 1 {
                        next.domains[x] &= im;
                    } else {
                        next.domains[x] &= !im;
                    }
                }
            }
        }
        let ok = (0..inc.npoints).all(|x| next.img[x].is_some() || next.domains[x] != 0);
        ok.then_some(next)
    }

    fn pick(&self, st: &State) -> Option<usize> {
        let unassigned = self
            .order_hint
            .iter()
            .copied()
            .filter(|&x| st.img[x].is_none());
        // frame points first, in order; afterwards the most constrained point
        let first = unassigned.clone().next()?;
        if self.order_hint.iter().position(|&x| x == first)? < self.frame_len() {
            return Some(first);
        }
        unassigned.min_by_key(|&x| (st.domains[x].count_ones(), x))
    }

    fn frame_len(&self) -> usize {
        self.order_hint
            .len()
            .min(self.inc.coords.first().map_or(0, Vec::len) + 1)
    }

    fn run(&self, st: State, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if count > self.limit {
            return Err(AutError::BudgetExceeded {
                count,
                limit: self.limit,
            });
        }
        let Some(p) = self.pick(&st) else {
            out.push(st.img.iter().map(|x| x.expect("complete")).collect());
            return Ok(());
        };
        let mut dom = st.domains[p];
        while dom != 0 {
            let t = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            if let Some(next) = self.assign(&st, p, t) {
                self.run(next, out)?;
            }
        }
        Ok(())
    }
}

/// Extends a point bijection to the whole lattice via spans.
fn extend_to_lattice(
    lattice: &Arc<Lattice>,
    inc: &Incidence,
    images: &[usize],
) -> Option<SubspacePermutation> {
    let ambient = lattice.ambient();
    let mut out = Vec::with_capacity(lattice.len());
    for s in lattice.subspaces() {
        if s.is_point() {
            let i = lattice.index_of(s)?;
            out.push(images[i]);
            continue;
        }
        let pts: Vec<Row> = s
            .point_basis()
            .iter()
            .map(|b| {
                let x = linalg::normalize(ambient.field(), b);
                let idx = lattice.index_of(&Subspace::point(ambient, &x).ok()?)?;
                Some(inc.coords[images[idx]].clone())
            })
            .collect::<Option<_>>()?;
        match Subspace::span_of_points(ambient, &pts).ok()? {
            Linear::Proper(img) if img.dim() == s.dim() => out.push(lattice.index_of(&img)?),
            _ => return None,
        }
    }
    SubspacePermutation::from_images(lattice, out).ok()
}

/// All dimension-preserving lattice bijections that preserve incidence,
/// found by backtracking on point images (projective frame first, then the
/// most constrained point) with collinearity forward checking. Each leaf is
/// extended to the lattice and checked against the flag condition; results
/// are sorted by image vector.
pub fn collineation_search(lattice: &Arc<Lattice>, budget: u64) -> Result<Vec<GradedPermutation>> {
    let inc = Incidence::new(lattice)?;
    let ambient = lattice.ambient();
    let w = ambient.width();
    let mut frame: Vec<usize> = Vec::new();
    for i in 0..w {
        let mut e = vec![0u32; w];
        e[i] = 1;
        frame.push(
            lattice
                .index_of(&Subspace::point(ambient, &e)?)
                .expect("frame point"),
        );
    }
    let ones = vec![1u32; w];
    frame.push(
        lattice
            .index_of(&Subspace::point(ambient, &ones)?)
            .expect("frame point"),
    );
    let mut order_hint = frame.clone();
    order_hint.extend((0..inc.npoints).filter(|p| !frame.contains(p)));

    let nodes = AtomicU64::new(0);
    let search = Search {
        inc: &inc,
        order_hint,
        nodes: &nodes,
        limit: budget,
    };
    let root = State {
        img: vec![None; inc.npoints],
        domains: vec![inc.full_mask(); inc.npoints],
    };
    let first = frame[0];
    let branches: Vec<Vec<Vec<usize>>> = (0..inc.npoints)
        .into_par_iter()
        .map(|t| {
            let mut out = Vec::new();
            if let Some(st) = search.assign(&root, first, t) {
                search.run(st, &mut out)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut leaves: Vec<Vec<usize>> = branches.into_iter().flatten().collect();
    leaves.sort();

    let perms: Vec<Option<GradedPermutation>> = leaves
        .par_iter()
        .map(|imgs| {
            let perm = extend_to_lattice(lattice, &inc, imgs)?;
            let g = GradedPermutation::new(perm).ok()?;
            (g.mode == Grading::Preserving).then_some(g)
        })
        .collect();
    let mut out: Vec<GradedPermutation> = perms.into_iter().flatten().collect();
    out.sort_by(|a, b| a.perm.images().cmp(b.perm.images()));
    Ok(out)
}

/// Reconstructs `g` with `g·p = σ(p)` for every point from the images of the
/// standard frame, then checks every point. `sigma[i]` is the point index of
/// the image of point `i`.
pub fn realize_as_pgl(lattice: &Lattice, sigma: &[usize]) -> Result<ProjectiveMap> {
    let inc = Incidence::new(lattice)?;
    let n = inc.npoints;
    if sigma.len() != n || sigma.iter().any(|&t| t >= n) {
        return Err(AutError::NotBijective);
    }
    let mut seen = vec![false; n];
    if sigma.iter().any(|&t| std::mem::replace(&mut seen[t], true)) {
        return Err(AutError::NotBijective);
    }
    for mask in &inc.line_masks {
        let img = (0..n)
            .filter(|&p| mask >> p & 1 == 1)
            .fold(0u128, |m, p| m | (1u128 << sigma[p]));
        if !inc.line_masks.contains(&img) {
            return Err(AutError::NotCollinearityPreserving);
        }
    }
    let ambient = lattice.ambient();
    let field = ambient.field();
    let w = ambient.width();
    let image_of = |x: &[u32]| -> Result<Row> {
        let p = Subspace::point(ambient, x)?;
        let i = lattice.index_of(&p).ok_or(AutError::AmbientMismatch)?;
        Ok(inc.coords[sigma[i]].clone())
    };
    let mut cols: Vec<Row> = Vec::with_capacity(w);
    for i in 0..w {
        let mut e = vec![0u32; w];
        e[i] = 1;
        cols.push(image_of(&e)?);
    }
    let target = image_of(&vec![1u32; w])?;
    // Y has the frame images as columns; solve Y λ = y*
    let y: Vec<Row> = (0..w)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let y_inv = linalg::invert(field, &y).ok_or(AutError::NotRealizable)?;
    let lambda = linalg::mat_vec(field, &y_inv, &target);
    if lambda.contains(&0) {
        return Err(AutError::NotRealizable);
    }
    let g: Vec<Row> = (0..w)
        .map(|r| (0..w).map(|c| field.mul(y[r][c], lambda[c])).collect())
        .collect();
    let map = ProjectiveMap::new(ambient, g).map_err(|_| AutError::NotRealizable)?;
    let ok = (0..n).all(|p| map.apply_point(&inc.coords[p]) == inc.coords[sigma[p]]);
    if ok {
        Ok(map)
    } else {
        Err(AutError::NotRealizable)
    }
}

/// Point permutation `x ↦ g·x`, as point indices.
pub fn point_action(lattice: &Lattice, g: &ProjectiveMap) -> Result<Vec<usize>> {
    lattice
        .points()
        .iter()
        .map(|p| {
            let img = act(g, p)?;
            lattice.index_of(&img).ok_or(AutError::AmbientMismatch)
        })
        .collect()
}

/// `x ↦ Frob(x)` applied coordinatewise: collinearity-preserving, and not
/// projective-linear unless the field is prime.
pub fn frobenius_point_permutation(lattice: &Lattice) -> Result<Vec<usize>> {
    let ambient = lattice.ambient();
    let field = ambient.field();
    lattice
        .points()
        .iter()
        .map(|p| {
            let x: Row = p
                .point_coords()
                .expect("dimension 0")
                .iter()
                .map(|&c| field.frobenius(c))
                .collect();
            lattice
                .index_of(&Subspace::point(ambient, &x)?)
                .ok_or(AutError::AmbientMismatch)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::ChowGroup;

    fn lattice(q: u64, n: usize) -> Arc<Lattice> {
        Arc::new(Lattice::for_params(q, n).unwrap())
    }

    fn swap01(a: &Ambient) -> ProjectiveMap {
        let w = a.width();
        let m = (0..w)
            .map(|i| {
                let src = match i {
                    0 => 1,
                    1 => 0,
                    k => k,
                };
                (0..w).map(|j| u32::from(j == src)).collect()
            })
            .collect();
        ProjectiveMap::new(a, m).unwrap()
    }

    #[test]
    fn canonical_scaling() {
        let lat = lattice(3, 1);
        let a = lat.ambient();
        let g = ProjectiveMap::new(a, vec![vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(g.matrix(), &[vec![1, 2], vec![0, 1]]);
        let h = ProjectiveMap::new(a, g.matrix().to_vec()).unwrap();
        assert_eq!(g, h);
        assert_eq!(
            ProjectiveMap::new(a, vec![vec![1, 1], vec![2, 2]]).unwrap_err(),
            AutError::NotInvertible
        );
    }

    #[test]
    fn act_examples() {
        let lat = lattice(2, 2);
        let a = lat.ambient();
        let p = Subspace::point(a, &[1, 0, 0]).unwrap();
        assert_eq!(act(&ProjectiveMap::identity(a), &p).unwrap(), p);
        assert_eq!(
            act(&swap01(a), &p).unwrap(),
            Subspace::point(a, &[0, 1, 0]).unwrap()
        );
    }

    #[test]
    fn pgl_enumeration_counts() {
        for (q, n) in [(2u64, 1usize), (2, 2), (3, 1)] {
            let lat = lattice(q, n);
            let all = enumerate_pgl(lat.ambient()).unwrap();
            assert_eq!(all.len() as u64, pgl_order(n as u64, q).to_u64_digits()[0]);
        }
    }

    #[test]
    fn group_action_and_grading() {
        let lat = lattice(2, 2);
        let all = enumerate_pgl(lat.ambient()).unwrap();
        for g in all.iter().step_by(7) {
            for h in all.iter().step_by(11) {
                let gh = g.compose(h).unwrap();
                for l in lat.subspaces() {
                    let lhs = act(&gh, l).unwrap();
                    let rhs = act(g, &act(h, l).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    assert_eq!(lhs.dim(), l.dim());
                }
            }
        }
    }

    #[test]
    fn seven_cycles_in_fano() {
        let lat = lattice(2, 2);
        let all = enumerate_pgl(lat.ambient()).unwrap();
        let order = |g: &ProjectiveMap| {
            let mut k = 1;
            let mut cur = g.clone();
            while !cur.is_identity() {
                cur = cur.compose(g).unwrap();
                k += 1;
            }
            k
        };
        let g = all.iter().find(|g| order(g) == 7).unwrap();
        let sigma = point_action(&lat, g).unwrap();
        let mut x = 0;
        let mut len = 0;
        loop {
            x = sigma[x];
            len += 1;
            if x == 0 {
                break;
            }
        }
        assert_eq!(len, 7);
    }

    #[test]
    fn search_matches_pgl_fano() {
        let lat = lattice(2, 2);
        let found = collineation_search(&lat, SEARCH_BUDGET).unwrap();
        assert_eq!(found.len(), 168);
        let mut induced: Vec<Vec<usize>> = enumerate_pgl(lat.ambient())
            .unwrap()
            .iter()
            .map(|g| {
                induced_permutation(&lat, g)
                    .unwrap()
                    .permutation()
                    .images()
                    .to_vec()
            })
            .collect();
        induced.sort();
        let searched: Vec<Vec<usize>> = found
            .iter()
            .map(|g| g.permutation().images().to_vec())
            .collect();
        assert_eq!(searched, induced);
    }

    #[test]
    fn search_budget_is_reported() {
        let lat = lattice(2, 2);
        assert!(matches!(
            collineation_search(&lat, 10).unwrap_err(),
            AutError::BudgetExceeded { .. }
        ));
    }

    #[test]
    fn search_on_the_line_is_symmetric_group() {
        let lat = lattice(3, 1);
        assert_eq!(collineation_search(&lat, SEARCH_BUDGET).unwrap().len(), 24);
    }

    #[test]
    fn realize_round_trip_fano() {
        let lat = lattice(2, 2);
        for g in enumerate_pgl(lat.ambient()).unwrap() {
            let sigma = point_action(&lat, &g).unwrap();
            assert_eq!(realize_as_pgl(&lat, &sigma).unwrap(), g);
        }
        let id: Vec<usize> = (0..7).collect();
        assert!(realize_as_pgl(&lat, &id).unwrap().is_identity());
    }

    #[test]
    fn realize_rejects_bad_maps() {
        let lat = lattice(2, 2);
        let mut sigma: Vec<usize> = (0..7).collect();
        sigma.swap(0, 1);
        assert_eq!(
            realize_as_pgl(&lat, &sigma).unwrap_err(),
            AutError::NotCollinearityPreserving
        );
        assert_eq!(
            realize_as_pgl(&lat, &[0; 7]).unwrap_err(),
            AutError::NotBijective
        );
        let lat4 = lattice(4, 2);
        let frob = frobenius_point_permutation(&lat4).unwrap();
        assert_eq!(
            realize_as_pgl(&lat4, &frob).unwrap_err(),
            AutError::NotRealizable
        );
    }

    #[test]
    fn canonical_class_is_fixed() {
        let lat = lattice(2, 2);
        let chow = ChowGroup::new(&lat);
        let k = chow.canonical_class();
        let h_ref = lat.hyperplanes()[0].clone();
        for g in enumerate_pgl(lat.ambient()).unwrap() {
            let perm = induced_permutation(&lat, &g).unwrap();
            assert_eq!(chow.pullback(perm.permutation(), &k, &h_ref).unwrap(), k);
        }
    }
}
