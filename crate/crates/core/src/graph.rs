//! The commuting involution graph of a conjugacy class: vertices are the
//! class members, and two distinct members are adjacent exactly when they
//! commute.  This module computes exact breadth-first distance censuses,
//! diameters, pairwise distances, and the analogous census for the union of
//! all proper involution classes, plus validation of explicit path
//! certificates.
//!
//! Breadth-first layers are grown by scanning, for every still-unvisited
//! vertex, the current frontier until one commuting partner is found (no
//! adjacency lists are ever materialized).  The failed commuting tests abort
//! at the first disagreeing entry, which keeps the scan cheap; over GF(2) the
//! vertices are additionally packed into bit rows.  All listings and censuses
//! are deterministic, including under the optional parallel scan, because a
//! vertex's discovery level never depends on scan order.
//!
//! ```
//! use cigraph::gf::field;
//! use cigraph::graph::{bfs_census, distance};
//! use cigraph::involutions::{canonical_t, transposed_t, ClassSpec, DEFAULT_CLASS_CAP};
//!
//! let f = field(2, 1)?;
//! let spec = ClassSpec::new(&f, 4, 1)?;
//! let census = bfs_census(&spec, &canonical_t(&spec), false, DEFAULT_CLASS_CAP)?;
//!
//! // 105 vertices in shells of sizes 1, 24, 80; diameter 2.
//! assert_eq!(census.counts.values().copied().collect::<Vec<_>>(), [1, 24, 80]);
//! assert!(census.connected());
//!
//! // The representative and its transpose do not commute, so they sit at
//! // distance 2 — as far apart as this graph allows.
//! let d = distance(&spec, &canonical_t(&spec), &transposed_t(&spec), DEFAULT_CLASS_CAP)?;
//! assert_eq!(d, 2);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::Field;
use crate::involutions::{
    canonical_t, delta1, enumerate_class, ClassSpec, Involution, InvolutionError,
};
use crate::matrix::packed::PackedMat;
use crate::matrix::{commutes_codes, Mat};

/// Errors from graph-level computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    /// The graph has vertices the breadth-first search never reached.
    #[error("graph is disconnected: {unreached} vertices unreachable from the start")]
    Disconnected { unreached: u64 },
    /// The two endpoints lie in different connected components.
    #[error("no path joins the two endpoints")]
    Unreachable,
    /// A path certificate failed validation.
    #[error("certificate invalid at step {step}: {reason}")]
    BadCertificate { step: usize, reason: String },
}

/// Two distinct involutions commuting with each other (an edge of the graph).
pub fn adjacent(x: &Involution, y: &Involution) -> bool {
    x.mat() != y.mat() && x.mat().commutes_with(y.mat())
}

/// Result of a breadth-first distance census from a start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// Number of vertices at each finite distance from the start.
    pub counts: BTreeMap<u32, u64>,
    /// Number of vertices at each (distance, overlap) pair, where the
    /// overlap is `dim([V,x] ∩ [V,start])`; present only when requested.
    pub cells: Option<BTreeMap<(u32, usize), u64>>,
    /// Largest finite distance observed.
    pub eccentricity: u32,
    /// Vertices the search never reached (they sit at infinite distance).
    pub unreached: u64,
}

impl Census {
    pub fn connected(&self) -> bool {
        self.unreached == 0
    }

    /// Total number of vertices, reached or not.
    pub fn vertex_count(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.unreached
    }
}

/// Work size above which a level scan switches to the parallel path.
const PARALLEL_WORK_THRESHOLD: u64 = 1 << 22;

/// Commutation tests over the vertex list, with a bit-packed fast path for
/// GF(2) in dimension at most sixteen.
enum Backend<'a> {
    Packed(Vec<PackedMat>),
    Generic {
        codes: Vec<&'a [u8]>,
        n: usize,
        field: &'a Field,
    },
}

impl Backend<'_> {
    fn build<'a>(mats: impl Iterator<Item = &'a Mat> + Clone, field: &'a Field, n: usize) -> Backend<'a> {
        let packed: Option<Vec<PackedMat>> = mats.clone().map(PackedMat::from_mat).collect();
        match packed {
            Some(p) => Backend::Packed(p),
            None => Backend::Generic {
                codes: mats.map(|m| m.codes()).collect(),
                n,
                field,
            },
        }
    }

    /// Whether vertices `i` and `j` commute (callers keep `i != j`).
    fn commutes(&self, i: usize, j: usize) -> bool {
        match self {
            Backend::Packed(rows) => rows[i].commutes_with(&rows[j]),
            Backend::Generic { codes, n, field } => {
                commutes_codes(codes[i], codes[j], *n, field)
            }
        }
    }
}

/// Exact breadth-first distances from `start` to every vertex; `u32::MAX`
/// marks unreachable vertices.  With `target` set, the search stops as soon
/// as the target's level is fixed.  The parallel path yields the same levels
/// as the sequential one: each unvisited vertex's test against the frontier
/// is an independent pure function.
fn bfs_levels(
    backend: &Backend<'_>,
    count: usize,
    start: usize,
    target: Option<usize>,
    allow_parallel: bool,
) -> Vec<u32> {
    let mut dist = vec![u32::MAX; count];
    dist[start] = 0;
    let mut frontier: Vec<usize> = vec![start];
    let mut remaining: Vec<usize> = (0..count).filter(|&i| i != start).collect();
    let mut level = 0u32;
    while !frontier.is_empty() && !remaining.is_empty() {
        if let Some(t) = target {
            if dist[t] != u32::MAX {
                break;
            }
        }
        level += 1;
        let work = remaining.len() as u64 * frontier.len() as u64;
        let hit = |&u: &usize| frontier.iter().any(|&v| backend.commutes(u, v));
        let hits: Vec<bool> = if allow_parallel && work > PARALLEL_WORK_THRESHOLD {
            remaining.par_iter().map(hit).collect()
        } else {
            remaining.iter().map(hit).collect()
        };
        let mut next = Vec::new();
        let mut keep = Vec::new();
        for (u, reached) in remaining.iter().zip(&hits) {
            if *reached {
                dist[*u] = level;
                next.push(*u);
            } else {
                keep.push(*u);
            }
        }
        frontier = next;
        remaining = keep;
    }
    dist
}

fn vertex_index(class: &[Involution], x: &Involution) -> Result<usize, GraphError> {
    class
        .binary_search_by(|probe| probe.mat().cmp(x.mat()))
        .map_err(|_| InvolutionError::NotInClass.into())
}

pub(crate) fn bfs_census_with(
    spec: &ClassSpec,
    start: &Involution,
    with_cells: bool,
    cap: usize,
    allow_parallel: bool,
) -> Result<Census, GraphError> {
    if start.spec() != spec {
        return Err(InvolutionError::NotInClass.into());
    }
    let class = enumerate_class(spec, cap)?;
    let start_idx = vertex_index(&class, start)?;
    let backend = Backend::build(class.iter().map(Involution::mat), spec.field(), spec.n());
    let dist = bfs_levels(&backend, class.len(), start_idx, None, allow_parallel);
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut unreached = 0u64;
    for &d in &dist {
        if d == u32::MAX {
            unreached += 1;
        } else {
            *counts.entry(d).or_insert(0) += 1;
        }
    }
    let eccentricity = counts.keys().next_back().copied().unwrap_or(0);
    let cells = if with_cells {
        let base = start.commutator_space();
        let mut map: BTreeMap<(u32, usize), u64> = BTreeMap::new();
        for (inv, &d) in class.iter().zip(&dist) {
            if d == u32::MAX {
                continue;
            }
            let m = base
                .intersection_dim(&inv.commutator_space())
                .expect("class members share the ambient space");
            *map.entry((d, m)).or_insert(0) += 1;
        }
        Some(map)
    } else {
        None
    };
    Ok(Census {
        counts,
        cells,
        eccentricity,
        unreached,
    })
}

/// Breadth-first distance census of the class graph from `start`.
pub fn bfs_census(
    spec: &ClassSpec,
    start: &Involution,
    with_cells: bool,
    cap: usize,
) -> Result<Census, GraphError> {
    bfs_census_with(spec, start, with_cells, cap, true)
}

/// Exact diameter of the class graph.  Conjugation makes the graph
/// vertex-transitive, so the diameter equals the eccentricity of the
/// canonical representative.
pub fn diameter(spec: &ClassSpec, cap: usize) -> Result<u32, GraphError> {
    let census = bfs_census(spec, &canonical_t(spec), false, cap)?;
    if !census.connected() {
        return Err(GraphError::Disconnected {
            unreached: census.unreached,
        });
    }
    Ok(census.eccentricity)
}

/// Exact distance between two class members, by breadth-first search from
/// `x` stopping as soon as `y` is levelled.
pub fn distance(
    spec: &ClassSpec,
    x: &Involution,
    y: &Involution,
    cap: usize,
) -> Result<u32, GraphError> {
    if x.spec() != spec || y.spec() != spec {
        return Err(InvolutionError::NotInClass.into());
    }
    let class = enumerate_class(spec, cap)?;
    let xi = vertex_index(&class, x)?;
    let yi = vertex_index(&class, y)?;
    let backend = Backend::build(class.iter().map(Involution::mat), spec.field(), spec.n());
    let dist = bfs_levels(&backend, class.len(), xi, Some(yi), true);
    if dist[yi] == u32::MAX {
        Err(GraphError::Unreachable)
    } else {
        Ok(dist[yi])
    }
}

/// Outcome of the bounded distance decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceBound {
    Exact(u32),
    /// The distance is at least four (or the endpoints are disconnected).
    ExceedsThree,
}

/// Decides `d(x, y) <= 3` without enumerating the class: the distance-one
/// spheres of both endpoints are obtained by conjugating the canonical
/// sphere, and probed in a seeded shuffled order so that repeated runs are
/// reproducible while typical successes appear early.
pub fn bounded_distance(
    spec: &ClassSpec,
    x: &Involution,
    y: &Involution,
    cap: usize,
    seed: u64,
) -> Result<DistanceBound, GraphError> {
    if x.spec() != spec || y.spec() != spec {
        return Err(InvolutionError::NotInClass.into());
    }
    if x.mat() == y.mat() {
        return Ok(DistanceBound::Exact(0));
    }
    if x.mat().commutes_with(y.mat()) {
        return Ok(DistanceBound::Exact(1));
    }
    let sphere = delta1(spec, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conjugated_sphere = |member: &Involution| -> Result<Vec<Mat>, GraphError> {
        let canon = member
            .mat()
            .canonicalize_involution()
            .map_err(InvolutionError::from)?;
        let p = canon.conjugator;
        let pinv = p.inverse().map_err(InvolutionError::from)?;
        Ok(sphere
            .iter()
            .map(|z| p.mul(z.mat()).mul(&pinv))
            .collect())
    };
    let mut sphere_x = conjugated_sphere(x)?;
    sphere_x.shuffle(&mut rng);
    for z in &sphere_x {
        if z.commutes_with(y.mat()) {
            return Ok(DistanceBound::Exact(2));
        }
    }
    let mut sphere_y = conjugated_sphere(y)?;
    sphere_y.shuffle(&mut rng);
    for z in &sphere_x {
        for w in &sphere_y {
            if z.commutes_with(w) {
                return Ok(DistanceBound::Exact(3));
            }
        }
    }
    Ok(DistanceBound::ExceedsThree)
}

/// Census of the union graph over all proper involution classes of a fixed
/// dimension.  The central involution `-I` (which commutes with everything)
/// is not a class member and is excluded.  Conjugation still acts by graph
/// automorphisms and is transitive on each class, so the diameter is the
/// maximum eccentricity over one representative per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllInvolutionsCensus {
    /// Number of vertices contributed by each class rank.
    pub class_sizes: BTreeMap<usize, u64>,
    /// Eccentricity of each class's canonical representative in the union.
    pub eccentricities: BTreeMap<usize, u32>,
    /// Maximum of the eccentricities.
    pub diameter: u32,
}

impl AllInvolutionsCensus {
    pub fn vertex_count(&self) -> u64 {
        self.class_sizes.values().sum()
    }
}

/// Breadth-first censuses over the union of every involution class in
/// dimension `n`, from each class representative in turn.
pub fn all_involutions_census(
    field: &Field,
    n: usize,
    cap: usize,
) -> Result<AllInvolutionsCensus, GraphError> {
    let specs: Vec<ClassSpec> = (1..=n)
        .filter_map(|k| ClassSpec::new(field, n, k).ok())
        .collect();
    if specs.is_empty() {
        return Err(InvolutionError::InvalidClass {
            n,
            k: 1,
            char_two: field.has_char_two(),
        }
        .into());
    }
    let mut vertices: Vec<Involution> = Vec::new();
    let mut class_sizes = BTreeMap::new();
    let mut rep_indices: Vec<(usize, usize)> = Vec::new();
    for spec in &specs {
        let members = enumerate_class(spec, cap.saturating_sub(vertices.len()))
            .map_err(|e| match e {
                InvolutionError::ClassTooLarge { .. } => InvolutionError::ClassTooLarge { cap },
                other => other,
            })?;
        class_sizes.insert(spec.k(), members.len() as u64);
        let t = canonical_t(spec);
        let offset = vertices.len();
        let local = members
            .binary_search_by(|probe| probe.mat().cmp(t.mat()))
            .expect("representative is a class member");
        rep_indices.push((spec.k(), offset + local));
        vertices.extend(members);
    }
    let backend = Backend::build(vertices.iter().map(Involution::mat), field, n);
    let mut eccentricities = BTreeMap::new();
    for (k, idx) in rep_indices {
        let dist = bfs_levels(&backend, vertices.len(), idx, None, true);
        let unreached = dist.iter().filter(|&&d| d == u32::MAX).count() as u64;
        if unreached > 0 {
            return Err(GraphError::Disconnected { unreached });
        }
        eccentricities.insert(k, dist.iter().copied().max().unwrap_or(0));
    }
    let diameter = eccentricities.values().copied().max().unwrap_or(0);
    Ok(AllInvolutionsCensus {
        class_sizes,
        eccentricities,
        diameter,
    })
}

/// An explicit walk in the commuting involution graph, used as a
/// machine-checkable witness that two vertices lie within a given distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCertificate {
    vertices: Vec<Mat>,
}

impl PathCertificate {
    pub fn new(vertices: Vec<Mat>) -> PathCertificate {
        PathCertificate { vertices }
    }

    pub fn vertices(&self) -> &[Mat] {
        &self.vertices
    }

    /// Number of edges along the walk.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Checks that every vertex belongs to the class and that consecutive
    /// vertices are distinct and commute.
    pub fn validate(&self, spec: &ClassSpec) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::BadCertificate {
                step: 0,
                reason: "certificate has no vertices".into(),
            });
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if Involution::new(spec, v.clone()).is_err() {
                return Err(GraphError::BadCertificate {
                    step: i,
                    reason: "vertex is not a member of the class".into(),
                });
            }
        }
        for (i, pair) in self.vertices.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(GraphError::BadCertificate {
                    step: i,
                    reason: "consecutive vertices are equal".into(),
                });
            }
            if !pair[0].commutes_with(&pair[1]) {
                return Err(GraphError::BadCertificate {
                    step: i,
                    reason: "consecutive vertices do not commute".into(),
                });
            }
        }
        Ok(())
    }
}

/// Removes consecutive duplicate vertices (walks built from block
/// constructions sometimes idle at an endpoint).
pub(crate) fn collapse_walk(vertices: Vec<Mat>) -> Vec<Mat> {
    let mut out: Vec<Mat> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field;
    use crate::matrix::conjugate as conj;
    use rand::rngs::StdRng;
    use rand::Rng;

    fn random_invertible(f: &Field, n: usize, rng: &mut StdRng) -> Mat {
        loop {
            let codes: Vec<u8> = (0..n * n)
                .map(|_| rng.gen_range(0..f.order()) as u8)
                .collect();
            let m = Mat::from_codes(f, n, n, codes).unwrap();
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Reference census: full adjacency matrix plus a textbook queue search.
    fn reference_census(spec: &ClassSpec, start: &Involution) -> Census {
        let class = enumerate_class(spec, 1_000_000).unwrap();
        let n = class.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..i {
                let edge = adjacent(&class[i], &class[j]);
                adj[i][j] = edge;
                adj[j][i] = edge;
            }
        }
        let start_idx = class
            .iter()
            .position(|v| v.mat() == start.mat())
            .expect("start in class");
        let mut dist = vec![u32::MAX; n];
        dist[start_idx] = 0;
        let mut queue = std::collections::VecDeque::from([start_idx]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if adj[v][u] && dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        let mut counts = BTreeMap::new();
        let mut unreached = 0;
        for &d in &dist {
            if d == u32::MAX {
                unreached += 1;
            } else {
                *counts.entry(d).or_insert(0u64) += 1;
            }
        }
        Census {
            eccentricity: counts.keys().next_back().copied().unwrap_or(0),
            counts,
            cells: None,
            unreached,
        }
    }

    #[test]
    fn census_matches_reference_search_on_small_classes() {
        let f2 = field(2, 1).unwrap();
        let f3 = field(3, 1).unwrap();
        for spec in [
            ClassSpec::new(&f2, 3, 1).unwrap(),
            ClassSpec::new(&f3, 3, 1).unwrap(),
            ClassSpec::new(&f2, 4, 2).unwrap(),
        ] {
            let t = canonical_t(&spec);
            let fast = bfs_census(&spec, &t, false, 1_000_000).unwrap();
            let slow = reference_census(&spec, &t);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn frozen_censuses_for_dimension_four_over_gf2() {
        let f2 = field(2, 1).unwrap();
        let spec = ClassSpec::new(&f2, 4, 1).unwrap();
        let census = bfs_census(&spec, &canonical_t(&spec), false, 1_000_000).unwrap();
        assert_eq!(census.counts, BTreeMap::from([(0, 1), (1, 24), (2, 80)]));
        assert_eq!(census.eccentricity, 2);
        assert!(census.connected());

        let spec = ClassSpec::new(&f2, 4, 2).unwrap();
        let census = bfs_census(&spec, &canonical_t(&spec), true, 1_000_000).unwrap();
        assert_eq!(
            census.counts,
            BTreeMap::from([(0, 1), (1, 17), (2, 112), (3, 80)])
        );
        assert_eq!(census.eccentricity, 3);
        let cells = census.cells.unwrap();
        // Overlap classes refine each distance shell; the entries below are
        // the exact shell-by-overlap sizes for this graph.
        assert_eq!(
            cells,
            BTreeMap::from([
                ((0, 2), 1),
                ((1, 1), 12),
                ((1, 2), 5),
                ((2, 0), 64),
                ((2, 1), 48),
                ((3, 0), 32),
                ((3, 1), 48),
            ])
        );
    }

    #[test]
    fn census_is_invariant_under_conjugated_start() {
        let f2 = field(2, 1).unwrap();
        let f3 = field(3, 1).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for spec in [
            ClassSpec::new(&f2, 4, 2).unwrap(),
            ClassSpec::new(&f3, 4, 1).unwrap(),
        ] {
            let t = canonical_t(&spec);
            let baseline = bfs_census(&spec, &t, true, 1_000_000).unwrap();
            for _ in 0..3 {
                let g = random_invertible(spec.field(), spec.n(), &mut rng);
                let moved =
                    Involution::new(&spec, conj(&g, t.mat()).unwrap()).unwrap();
                let census = bfs_census(&spec, &moved, true, 1_000_000).unwrap();
                assert_eq!(census, baseline);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_levels_agree() {
        let f3 = field(3, 1).unwrap();
        let spec = ClassSpec::new(&f3, 4, 1).unwrap();
        let t = canonical_t(&spec);
        let seq = bfs_census_with(&spec, &t, true, 1_000_000, false).unwrap();
        let class = enumerate_class(&spec, 1_000_000).unwrap();
        let backend =
            Backend::build(class.iter().map(Involution::mat), spec.field(), spec.n());
        let start = vertex_index(&class, &t).unwrap();
        // Force the parallel path irrespective of the work threshold.
        let hits_parallel = {
            let dist = {
                let mut dist = vec![u32::MAX; class.len()];
                dist[start] = 0;
                let mut frontier = vec![start];
                let mut remaining: Vec<usize> =
                    (0..class.len()).filter(|&i| i != start).collect();
                let mut level = 0;
                while !frontier.is_empty() && !remaining.is_empty() {
                    level += 1;
                    let hits: Vec<bool> = remaining
                        .par_iter()
                        .map(|&u| frontier.iter().any(|&v| backend.commutes(u, v)))
                        .collect();
                    let mut next = Vec::new();
                    let mut keep = Vec::new();
                    for (u, h) in remaining.iter().zip(&hits) {
                        if *h {
                            dist[*u] = level;
                            next.push(*u);
                        } else {
                            keep.push(*u);
                        }
                    }
                    frontier = next;
                    remaining = keep;
                }
                dist
            };
            let mut counts = BTreeMap::new();
            for &d in &dist {
                *counts.entry(d).or_insert(0u64) += 1;
            }
            counts
        };
        let seq_counts: BTreeMap<u32, u64> = seq.counts.clone();
        assert_eq!(hits_parallel, seq_counts);
    }

    #[test]
    fn distances_agree_between_exact_and_bounded_procedures() {
        let f2 = field(2, 1).unwrap();
        let spec = ClassSpec::new(&f2, 4, 2).unwrap();
        let class = enumerate_class(&spec, 1_000_000).unwrap();
        let t = canonical_t(&spec);
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..25 {
            let x = class[rng.gen_range(0..class.len())].clone();
            let exact = distance(&spec, &t, &x, 1_000_000).unwrap();
            let bounded = bounded_distance(&spec, &t, &x, 1_000_000, 0).unwrap();
            assert_eq!(bounded, DistanceBound::Exact(exact));
        }
    }

    #[test]
    fn union_graph_over_gf2_has_diameter_three() {
        let f2 = field(2, 1).unwrap();
        let census = all_involutions_census(&f2, 3, 1_000_000).unwrap();
        assert_eq!(census.diameter, 3);
        assert_eq!(census.class_sizes, BTreeMap::from([(1, 21)]));
        let census = all_involutions_census(&f2, 4, 1_000_000).unwrap();
        assert_eq!(census.diameter, 3);
        assert_eq!(census.class_sizes, BTreeMap::from([(1, 105), (2, 210)]));
    }

    #[test]
    fn certificates_validate_edges_and_membership() {
        let f3 = field(3, 1).unwrap();
        let spec = ClassSpec::new(&f3, 4, 2).unwrap();
        let t = canonical_t(&spec);
        // diag(-1, -1, 1, 1) commutes with t and shares its class.
        let other = Mat::from_rows(
            &f3,
            &[
                vec![2, 0, 0, 0],
                vec![0, 2, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        )
        .unwrap();
        let good = PathCertificate::new(vec![t.mat().clone(), other.clone()]);
        assert_eq!(good.length(), 1);
        good.validate(&spec).unwrap();

        let repeated = PathCertificate::new(vec![t.mat().clone(), t.mat().clone()]);
        assert!(matches!(
            repeated.validate(&spec),
            Err(GraphError::BadCertificate { step: 0, .. })
        ));

        let outsider = PathCertificate::new(vec![t.mat().clone(), Mat::identity(&f3, 4)]);
        assert!(matches!(
            outsider.validate(&spec),
            Err(GraphError::BadCertificate { step: 1, .. })
        ));

        let non_commuting = {
            let mut g = Mat::identity(&f3, 4);
            g.set(0, 3, crate::gf::Elem::ONE);
            let moved = Involution::new(&spec, conj(&g, t.mat()).unwrap()).unwrap();
            assert!(!moved.mat().commutes_with(t.mat()));
            PathCertificate::new(vec![t.mat().clone(), moved.into_mat()])
        };
        assert!(matches!(
            non_commuting.validate(&spec),
            Err(GraphError::BadCertificate { .. })
        ));

        assert_eq!(
            collapse_walk(vec![
                t.mat().clone(),
                t.mat().clone(),
                other.clone(),
                other.clone(),
                t.mat().clone()
            ]),
            vec![t.mat().clone(), other, t.mat().clone()]
        );
    }
}
