//! Conjugacy classes of involutions in `GL_n` over a small finite field.
//!
//! An involution (`x^2 = I`, `x != I`) lies in the conjugacy class determined
//! by `k = rank(x - I)`.  Away from characteristic two the representative is
//! `t = diag(I_{n-k}, -I_k)` with `1 <= k <= n-1`; in characteristic two it is
//! the unipotent `t = I + sum_i e_{n-k+i, n-2k+i}` with `2k <= n`.  Everything
//! in this module is exact and deterministic: listings are sorted, and the
//! constructive operations validate their own output.
//!
//! The module provides:
//!
//! * class membership tests and full class enumeration by closing the
//!   representative under conjugation ([`class_of`], [`enumerate_class`]);
//! * the commuting neighbourhood of the representative, built directly from
//!   the block shape that commutation with `t` forces ([`delta1`]);
//! * for each feasible overlap `m = dim([V,x] ∩ [V,t])`, a class member `t_m`
//!   realizing that overlap together with an involutory permutation `w_m`
//!   conjugating it back to `t` (or to `t^T`) ([`make_tm`], [`make_wm`]);
//! * a block-lower-triangular transport moving `[V, t_m]` onto `[V, x]`
//!   ([`transport`]), and the exact decomposition `x = h y h^{-1}` with `y`
//!   in a fixed normal form ([`decompose_general`]), the workhorses behind
//!   the short-path constructions.
//!
//! ```
//! use cigraph::gf::field;
//! use cigraph::involutions::{canonical_t, delta1, enumerate_class, ClassSpec};
//!
//! let f = field(2, 1)?;
//! let spec = ClassSpec::new(&f, 3, 1)?;
//!
//! // The transvection class of GL_3(GF(2)) has 21 members ...
//! let members = enumerate_class(&spec, 10_000)?;
//! assert_eq!(members.len(), 21);
//! assert!(members.iter().all(|x| x.mat().is_involution()));
//!
//! // ... four of which commute with the canonical representative.
//! let t = canonical_t(&spec);
//! let sphere = delta1(&spec, 10_000)?;
//! assert_eq!(sphere.len(), 4);
//! assert!(sphere.iter().all(|x| x.mat().commutes_with(t.mat())));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

use std::collections::{HashSet, VecDeque};
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::gf::{Elem, Field};
use crate::matrix::{
    canonical_involution_matrix, complete_basis, conjugate, Mat, MatError, SubspaceBasis,
};

/// Default ceiling on the number of matrices any enumeration may produce.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

/// Errors from class-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    /// No involution class of rank `k` exists in dimension `n` over the field.
    #[error("no involution class of rank {k} in dimension {n} (characteristic two: {char_two})")]
    InvalidClass { n: usize, k: usize, char_two: bool },
    /// The requested overlap dimension is not achievable for the class.
    #[error("overlap {m} is outside the feasible range {lo}..={hi}")]
    InvalidM { m: usize, lo: usize, hi: usize },
    /// An enumeration grew beyond the configured cap.
    #[error("enumeration exceeded the cap of {cap} elements")]
    ClassTooLarge { cap: usize },
    /// A matrix handed in as a class member fails the membership test.
    #[error("matrix is not a member of the expected involution class")]
    NotInClass,
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// An involution conjugacy class of `GL_n`, identified by the field, the
/// ambient dimension `n`, and the rank `k` of `x - I` for its members.
#[derive(Clone, Debug)]
pub struct ClassSpec {
    field: Field,
    n: usize,
    k: usize,
}

impl PartialEq for ClassSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.field == other.field
    }
}

impl Eq for ClassSpec {}

impl ClassSpec {
    /// Validates the `(n, k)` pair against the field's characteristic.
    pub fn new(field: &Field, n: usize, k: usize) -> Result<ClassSpec, InvolutionError> {
        let valid = if field.has_char_two() {
            k >= 1 && 2 * k <= n
        } else {
            k >= 1 && k < n
        };
        if !valid {
            return Err(InvolutionError::InvalidClass {
                n,
                k,
                char_two: field.has_char_two(),
            });
        }
        Ok(ClassSpec {
            field: field.clone(),
            n,
            k,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn char_two(&self) -> bool {
        self.field.has_char_two()
    }

    /// The overlaps `m = dim([V,x] ∩ [V,t])` realized by members of the
    /// class: every value from `max(2k - n, 0)` through `k`.
    pub fn valid_m_range(&self) -> RangeInclusive<usize> {
        (2 * self.k).saturating_sub(self.n)..=self.k
    }
}

/// A validated member of a fixed involution class.
#[derive(Clone, Debug)]
pub struct Involution {
    mat: Mat,
    spec: ClassSpec,
}

impl PartialEq for Involution {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for Involution {}

impl std::hash::Hash for Involution {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl Involution {
    /// Wraps a matrix after checking it really belongs to the class.
    pub fn new(spec: &ClassSpec, mat: Mat) -> Result<Involution, InvolutionError> {
        let shape_ok = mat.is_square() && mat.rows() == spec.n && mat.field() == spec.field();
        if !shape_ok || !mat.is_involution() {
            return Err(InvolutionError::NotInClass);
        }
        let ident = Mat::identity(spec.field(), spec.n);
        if mat.sub(&ident).rank() != spec.k {
            return Err(InvolutionError::NotInClass);
        }
        Ok(Involution {
            mat,
            spec: spec.clone(),
        })
    }

    /// Wraps a matrix known by construction to be a class member.
    pub(crate) fn trusted(spec: &ClassSpec, mat: Mat) -> Involution {
        debug_assert!(Involution::new(spec, mat.clone()).is_ok());
        Involution {
            mat,
            spec: spec.clone(),
        }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn spec(&self) -> &ClassSpec {
        &self.spec
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    /// The commutator space `[V, x] = im(x - I)`, a `k`-dimensional subspace.
    pub fn commutator_space(&self) -> SubspaceBasis {
        let ident = Mat::identity(self.spec.field(), self.spec.n);
        self.mat.sub(&ident).image_basis()
    }
}

/// The canonical representative of the class.
pub fn canonical_t(spec: &ClassSpec) -> Involution {
    Involution::trusted(
        spec,
        canonical_involution_matrix(spec.field(), spec.n, spec.k),
    )
}

/// The transpose of the canonical representative (again a class member; it
/// differs from `t` only in characteristic two).
pub fn transposed_t(spec: &ClassSpec) -> Involution {
    Involution::trusted(spec, canonical_t(spec).mat().transpose())
}

/// Identifies the class a matrix belongs to: `None` for non-involutions and
/// for the scalar involutions `I` and `-I`, which form singleton classes.
pub fn class_of(mat: &Mat) -> Option<ClassSpec> {
    if !mat.is_square() || !mat.is_involution() {
        return None;
    }
    let n = mat.rows();
    let k = mat.sub(&Mat::identity(mat.field(), n)).rank();
    ClassSpec::new(mat.field(), n, k).ok()
}

/// Generators of the full general linear group: one elementary transvection,
/// an `n`-cycle permutation, and (for fields larger than two elements) a
/// primitive scaling in the first coordinate.
fn conjugation_generators(field: &Field, n: usize) -> Vec<Mat> {
    assert!(n >= 2);
    let mut transvection = Mat::identity(field, n);
    transvection.set(0, 1, Elem::ONE);
    let mut cycle = Mat::zero(field, n, n);
    for i in 0..n {
        cycle.set((i + 1) % n, i, Elem::ONE);
    }
    let mut gens = vec![transvection, cycle];
    if field.order() > 2 {
        let mut scaling = Mat::identity(field, n);
        scaling.set(0, 0, field.primitive());
        gens.push(scaling);
    }
    gens
}

/// Every member of the class, sorted, computed by closing the canonical
/// representative under conjugation by group generators.
pub fn enumerate_class(
    spec: &ClassSpec,
    cap: usize,
) -> Result<Vec<Involution>, InvolutionError> {
    let t = canonical_t(spec).into_mat();
    let gens: Vec<(Mat, Mat)> = conjugation_generators(spec.field(), spec.n)
        .into_iter()
        .map(|g| {
            let inv = g.inverse().expect("generators are invertible");
            (g, inv)
        })
        .collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(t.codes().to_vec());
    if 1 > cap {
        return Err(InvolutionError::ClassTooLarge { cap });
    }
    let mut queue: VecDeque<Mat> = VecDeque::from([t]);
    let mut members: Vec<Mat> = Vec::new();
    while let Some(x) = queue.pop_front() {
        for (g, ginv) in &gens {
            let y = g.mul(&x).mul(ginv);
            if seen.insert(y.codes().to_vec()) {
                if seen.len() > cap {
                    return Err(InvolutionError::ClassTooLarge { cap });
                }
                queue.push_back(y);
            }
        }
        members.push(x);
    }
    members.sort_unstable();
    Ok(members
        .into_iter()
        .map(|m| Involution::trusted(spec, m))
        .collect())
}

/// All involutions of dimension `n` with `rank(x - I) = k`, scalar ones
/// included, sorted.  Ranks realized by no involution yield the empty list.
pub fn involutions_with_rank(
    field: &Field,
    n: usize,
    k: usize,
    cap: usize,
) -> Result<Vec<Mat>, InvolutionError> {
    if k == 0 {
        return Ok(vec![Mat::identity(field, n)]);
    }
    if !field.has_char_two() && k == n {
        return Ok(vec![Mat::scalar(field, n, field.neg(Elem::ONE))]);
    }
    match ClassSpec::new(field, n, k) {
        Ok(spec) => Ok(enumerate_class(&spec, cap)?
            .into_iter()
            .map(Involution::into_mat)
            .collect()),
        Err(InvolutionError::InvalidClass { .. }) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// The distance-one sphere around the canonical representative: all class
/// members other than `t` that commute with `t`, sorted.  The listing is
/// built directly from the block shape commutation forces, not by filtering
/// the full class.
pub fn delta1(spec: &ClassSpec, cap: usize) -> Result<Vec<Involution>, InvolutionError> {
    let mut out = if spec.char_two() {
        delta1_unipotent(spec, cap)?
    } else {
        delta1_diagonalizable(spec, cap)?
    };
    out.sort_unstable_by(|a, b| a.mat.cmp(&b.mat));
    Ok(out)
}

/// Commuting with `diag(I_{n-k}, -I_k)` preserves both eigenspaces, so the
/// neighbours are exactly the block-diagonal involutions `diag(A, C)` with
/// `rank(A - I) + rank(C - I) = k`, minus `t` itself.
fn delta1_diagonalizable(
    spec: &ClassSpec,
    cap: usize,
) -> Result<Vec<Involution>, InvolutionError> {
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    let t = canonical_t(spec);
    let mut out = Vec::new();
    for a in 0..=(n - k).min(k) {
        let c = k - a;
        let tops = involutions_with_rank(f, n - k, a, cap)?;
        let bottoms = involutions_with_rank(f, k, c, cap)?;
        for top in &tops {
            for bottom in &bottoms {
                let mut x = Mat::zero(f, n, n);
                x.paste(0, 0, top);
                x.paste(n - k, n - k, bottom);
                if x == *t.mat() {
                    continue;
                }
                if out.len() == cap {
                    return Err(InvolutionError::ClassTooLarge { cap });
                }
                out.push(Involution::trusted(spec, x));
            }
        }
    }
    Ok(out)
}

/// In characteristic two, commutation with the unipotent representative
/// forces, in block coordinates of sizes `(n-2k, k, k)`, the shape
///
/// ```text
///     [ P  Q  0 ]
/// x = [ 0  C  0 ]
///     [ B1 B2 C ]
/// ```
///
/// with `P^2 = I`, `C^2 = I`, `PQ + QC = 0`, `B1 P + C B1 = 0`, and
/// `C B2 + B2 C = B1 Q`.  The first two constraints are enumerated over
/// involutions-by-rank; the rest are solved as linear systems.  Class
/// membership then filters on `rank(x - I) = k`.
fn delta1_unipotent(spec: &ClassSpec, cap: usize) -> Result<Vec<Involution>, InvolutionError> {
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    let d = n - 2 * k;
    let t = canonical_t(spec);
    let ident = Mat::identity(f, n);
    let q_order = f.order() as u128;
    let mut out = Vec::new();
    for a in 0..=d / 2 {
        let ps = involutions_with_rank(f, d, a, cap)?;
        for c_rank in 0..=k / 2 {
            // rank(x - I) is at least rank(P - I) + rank(C - I).
            if a + c_rank > k {
                continue;
            }
            let cs = involutions_with_rank(f, k, c_rank, cap)?;
            for p in &ps {
                for c in &cs {
                    let q_kernel = sylvester_operator(p, c, d, k).nullspace();
                    let b1_kernel = sylvester_operator(c, p, k, d).nullspace();
                    let b2_operator = sylvester_operator(c, c, k, k);
                    let b2_kernel = b2_operator.nullspace();
                    let combos = [&q_kernel, &b1_kernel, &b2_kernel]
                        .iter()
                        .try_fold(1u128, |acc, kernel| {
                            q_order
                                .checked_pow(kernel.cols() as u32)
                                .and_then(|s| acc.checked_mul(s))
                        })
                        .filter(|&total| total <= cap as u128)
                        .ok_or(InvolutionError::ClassTooLarge { cap })?;
                    let _ = combos;
                    for qv in span_vectors(&q_kernel) {
                        let qm = unvectorize(f, d, k, &qv);
                        for b1v in span_vectors(&b1_kernel) {
                            let b1 = unvectorize(f, k, d, &b1v);
                            let rhs = vectorize(&b1.mul(&qm));
                            let Some(particular) = b2_operator.solve(&rhs) else {
                                continue;
                            };
                            for b2v in span_vectors(&b2_kernel) {
                                let b2 = unvectorize(f, k, k, &b2v.add(&particular));
                                let mut x = Mat::zero(f, n, n);
                                x.paste(0, 0, p);
                                x.paste(0, d, &qm);
                                x.paste(d, d, c);
                                x.paste(d + k, 0, &b1);
                                x.paste(d + k, d, &b2);
                                x.paste(d + k, d + k, c);
                                debug_assert!(x.is_involution());
                                if x.sub(&ident).rank() != k || x == *t.mat() {
                                    continue;
                                }
                                if out.len() == cap {
                                    return Err(InvolutionError::ClassTooLarge { cap });
                                }
                                out.push(Involution::trusted(spec, x));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Cross-checks the shape-driven neighbourhood against a brute filter of the
/// full class by commutation; returns whether the two listings agree exactly.
pub fn delta1_shape_check(spec: &ClassSpec, cap: usize) -> Result<bool, InvolutionError> {
    let shaped = delta1(spec, cap)?;
    let t = canonical_t(spec);
    let filtered: Vec<Involution> = enumerate_class(spec, cap)?
        .into_iter()
        .filter(|x| x.mat() != t.mat() && x.mat().commutes_with(t.mat()))
        .collect();
    Ok(shaped == filtered)
}

/// Row-major vectorization of a matrix as a single column.
fn vectorize(m: &Mat) -> Mat {
    Mat::from_codes(m.field(), m.rows() * m.cols(), 1, m.codes().to_vec())
        .expect("codes are already validated")
}

/// Inverse of [`vectorize`] for the stated shape.
fn unvectorize(field: &Field, rows: usize, cols: usize, v: &Mat) -> Mat {
    debug_assert_eq!(v.rows(), rows * cols);
    debug_assert_eq!(v.cols(), 1);
    Mat::from_codes(field, rows, cols, v.codes().to_vec()).expect("codes are already validated")
}

/// Matrix of the linear map `M -> A M + M B` on `rows x cols` matrices in
/// row-major coordinates (`A` is `rows x rows`, `B` is `cols x cols`).
fn sylvester_operator(a: &Mat, b: &Mat, rows: usize, cols: usize) -> Mat {
    let f = a.field();
    let dim = rows * cols;
    let mut op = Mat::zero(f, dim, dim);
    for r in 0..rows {
        for c in 0..cols {
            let unit = Mat::unit(f, rows, cols, r, c);
            let image = a.mul(&unit).add(&unit.mul(b));
            op.paste(0, r * cols + c, &vectorize(&image));
        }
    }
    op
}

/// Iterator over every vector in the column span of a basis, in base-`q`
/// odometer order over the coefficients (deterministic).
struct SpanVectors {
    basis: Mat,
    index: u128,
    total: u128,
}

fn span_vectors(basis: &Mat) -> SpanVectors {
    let q = basis.field().order() as u128;
    let total = q
        .checked_pow(basis.cols() as u32)
        .expect("span size checked against the cap before iteration");
    SpanVectors {
        basis: basis.clone(),
        index: 0,
        total,
    }
}

impl Iterator for SpanVectors {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.index == self.total {
            return None;
        }
        let f = self.basis.field().clone();
        let q = f.order() as u128;
        let mut acc = Mat::zero(&f, self.basis.rows(), 1);
        let mut rem = self.index;
        for j in 0..self.basis.cols() {
            let digit = (rem % q) as u8;
            rem /= q;
            if digit != 0 {
                acc = acc.add(&self.basis.col(j).scalar_mul(Elem(digit)));
            }
        }
        self.index += 1;
        Some(acc)
    }
}

/// `dim([V,x] ∩ [V,t])` for a class member.
pub fn overlap(spec: &ClassSpec, x: &Involution) -> usize {
    assert_eq!(x.spec(), spec, "member belongs to a different class");
    canonical_t(spec)
        .commutator_space()
        .intersection_dim(&x.commutator_space())
        .expect("spaces share the ambient dimension")
}

fn check_m(spec: &ClassSpec, m: usize) -> Result<(), InvolutionError> {
    let range = spec.valid_m_range();
    if range.contains(&m) {
        Ok(())
    } else {
        Err(InvolutionError::InvalidM {
            m,
            lo: *range.start(),
            hi: *range.end(),
        })
    }
}

/// Permutation exchanging block `i` with block `j` (equal sizes) of a block
/// decomposition, identity elsewhere.  Involutory by construction.
fn block_swap(field: &Field, sizes: &[usize], i: usize, j: usize) -> Mat {
    assert_eq!(sizes[i], sizes[j], "swapped blocks must have equal size");
    let n: usize = sizes.iter().sum();
    let mut offsets = vec![0usize];
    for s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let mut w = Mat::zero(field, n, n);
    for (b, &size) in sizes.iter().enumerate() {
        let target = if b == i {
            j
        } else if b == j {
            i
        } else {
            b
        };
        for r in 0..size {
            w.set(offsets[target] + r, offsets[b] + r, Elem::ONE);
        }
    }
    w
}

/// The unipotent involution `J(n, k) = I + sum_{i<=k} e_{n-k+i, i}` (identity
/// block in the first `k` columns of the lower-left corner); characteristic
/// two only, conjugate to the canonical representative of rank `k`.
pub(crate) fn unipotent_j(field: &Field, n: usize, k: usize) -> Mat {
    assert!(field.has_char_two() && 2 * k <= n);
    let mut m = Mat::identity(field, n);
    for i in 0..k {
        m.set(n - k + i, i, Elem::ONE);
    }
    m
}

/// A reproducible pseudo-random class member: the canonical representative
/// conjugated by a seeded random invertible matrix.  The same seed always
/// yields the same member, independent of platform.
pub fn random_member(spec: &ClassSpec, seed: u64) -> Involution {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (f, n) = (spec.field(), spec.n);
    let g = loop {
        let codes: Vec<u8> = (0..n * n)
            .map(|_| rng.gen_range(0..f.order()) as u8)
            .collect();
        let m = Mat::from_codes(f, n, n, codes).expect("sampled codes are in range");
        if m.is_invertible() {
            break m;
        }
    };
    let x = conjugate(&g, canonical_t(spec).mat()).expect("conjugation by an invertible matrix");
    Involution::new(spec, x).expect("conjugation preserves the class")
}

/// The permutation with `w0 t w0 = t^T` in characteristic two: it swaps the
/// two `k`-blocks of the `(n-2k, k, k)` decomposition.
pub(crate) fn w_zero(spec: &ClassSpec) -> Mat {
    assert!(spec.char_two());
    block_swap(
        spec.field(),
        &[spec.n - 2 * spec.k, spec.k, spec.k],
        1,
        2,
    )
}

/// A class member whose commutator space meets `[V, t]` in dimension exactly
/// `m`.  It commutes with `t`, except in the characteristic-two branch
/// `2m < k` where it is built as a transpose and commutes with `t^T` instead.
pub fn make_tm(spec: &ClassSpec, m: usize) -> Result<Involution, InvolutionError> {
    check_m(spec, m)?;
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    if !spec.char_two() {
        // Sign pattern (+, -, -, +) on blocks of sizes
        // (n-2k+m, k-m, m, k-m): the middle two blocks carry the -1s.
        let mut t_m = Mat::identity(f, n);
        let minus_one = f.neg(Elem::ONE);
        for i in (n + m - 2 * k)..(n + m - k) {
            t_m.set(i, i, minus_one);
        }
        return Involution::new(spec, t_m);
    }
    if 2 * m < k {
        return Involution::new(spec, make_tm(spec, k - m)?.mat().transpose());
    }
    // Blocks (d, k, k): a copy of J(k, k-m) in each k-block, plus a centered
    // identity of size 2m-k linking them.
    let d = n - 2 * k;
    let j_block = unipotent_j(f, k, k - m);
    let mut t_m = Mat::identity(f, n);
    t_m.paste(d, d, &j_block);
    t_m.paste(d + k, d + k, &j_block);
    for i in 0..(2 * m - k) {
        t_m.set(d + k + (k - m) + i, d + (k - m) + i, Elem::ONE);
    }
    Involution::new(spec, t_m)
}

/// The involutory permutation pairing [`make_tm`]: `w_m t_m w_m = t` in the
/// commuting branches, and `w_m t_m w_m = t^T` in the characteristic-two
/// branch `2m < k`.
pub fn make_wm(spec: &ClassSpec, m: usize) -> Result<Mat, InvolutionError> {
    check_m(spec, m)?;
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    if !spec.char_two() {
        return Ok(block_swap(f, &[n + m - 2 * k, k - m, m, k - m], 1, 3));
    }
    if 2 * m < k {
        return make_wm(spec, k - m);
    }
    Ok(block_swap(f, &[n - 2 * k + m, k - m, k - m, m], 1, 2))
}

/// A basis (as columns) of the intersection of two subspaces.
fn intersection_basis(a: &SubspaceBasis, b: &SubspaceBasis) -> Vec<Mat> {
    let f = a.basis().field();
    let n = a.ambient();
    let mut joined = Mat::zero(f, n, a.dim() + b.dim());
    joined.paste(0, 0, a.basis());
    joined.paste(0, a.dim(), b.basis());
    let kernel = joined.nullspace();
    (0..kernel.cols())
        .map(|j| {
            let coeffs = kernel.col(j).block(0..a.dim(), 0..1);
            a.basis().mul(&coeffs)
        })
        .collect()
}

/// An ordered basis of the ambient space adapted to the flag
/// `(base ∩ other) ⊂ base ⊂ base + other ⊂ V`: the first `dim base` columns
/// span `base`, and columns `1..=m` followed by the `other`-completion span
/// `other`.
fn flag_adapted_basis(base: &SubspaceBasis, other: &SubspaceBasis, n: usize) -> Vec<Mat> {
    let f = base.basis().field();
    let inter = intersection_basis(base, other);
    let base_cols: Vec<Mat> = (0..base.dim()).map(|j| base.basis().col(j)).collect();
    let other_cols: Vec<Mat> = (0..other.dim()).map(|j| other.basis().col(j)).collect();
    let standard: Vec<Mat> = (0..n).map(|i| Mat::unit(f, n, 1, i, 0)).collect();
    let inside_base = complete_basis(f, n, &inter, &base_cols, base.dim());
    let with_other = complete_basis(
        f,
        n,
        &inside_base,
        &other_cols,
        base.dim() + other.dim() - inter.len(),
    );
    complete_basis(f, n, &with_other, &standard, n)
}

fn is_zero_mat(m: &Mat) -> bool {
    m.codes().iter().all(|&c| c == 0)
}

/// A block-lower-triangular change of basis `g` (it stabilizes `[V, t]`)
/// with `g · [V, t_m] = [V, x]`, where `m` is the overlap of `x` with the
/// canonical representative.
pub fn transport(spec: &ClassSpec, x: &Involution) -> Result<Mat, InvolutionError> {
    if x.spec() != spec {
        return Err(InvolutionError::NotInClass);
    }
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    let t = canonical_t(spec);
    let m = overlap(spec, x);
    let t_m = make_tm(spec, m)?;
    let base = t.commutator_space();
    let source = t_m.commutator_space();
    let target = x.commutator_space();
    let from_cols = flag_adapted_basis(&base, &source, n);
    let to_cols = flag_adapted_basis(&base, &target, n);
    let from = Mat::from_cols(f, n, &from_cols);
    let to = Mat::from_cols(f, n, &to_cols);
    let g = to.mul(&from.inverse()?);
    assert!(
        is_zero_mat(&g.block(0..n - k, n - k..n)),
        "transport must stabilize the commutator space of t"
    );
    let moved = g.mul(source.basis()).image_basis();
    assert_eq!(
        moved.basis(),
        target.basis(),
        "transport must carry [V, t_m] onto [V, x]"
    );
    Ok(g)
}

/// Output of [`decompose_general`]: the exact factorization `x = h y h^{-1}`
/// together with the overlap `m` of `x` against the representative.
///
/// Away from characteristic two, `y` is the `t_m` sign pattern with one extra
/// block in the corner position (rows of the first minus-block, columns of
/// the last plus-block), and `h` is block-lower-triangular.  In
/// characteristic two, `y = [[I, 0], [B, I]]` with `rank(B) = k`, so `y`
/// always commutes with the representative.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub h: Mat,
    pub y: Mat,
    pub m: usize,
}

/// Factors a class member as `x = h y h^{-1}` with `y` in the normal form
/// described on [`Decomposition`].  The reconstruction is asserted exactly.
pub fn decompose_general(
    spec: &ClassSpec,
    x: &Involution,
) -> Result<Decomposition, InvolutionError> {
    if x.spec() != spec {
        return Err(InvolutionError::NotInClass);
    }
    let (f, n, k) = (spec.field(), spec.n, spec.k);
    let g = transport(spec, x)?;
    let m = overlap(spec, x);
    if spec.char_two() {
        let w = make_wm(spec, m)?;
        let h = if 2 * m >= k {
            g.mul(&w)
        } else {
            g.mul(&w).mul(&w_zero(spec))
        };
        let y = conjugate(&h.inverse()?, x.mat())?;
        assert_eq!(y.block(0..n - k, 0..n - k), Mat::identity(f, n - k));
        assert!(is_zero_mat(&y.block(0..n - k, n - k..n)));
        assert_eq!(y.block(n - k..n, n - k..n), Mat::identity(f, k));
        assert_eq!(y.block(n - k..n, 0..n - k).rank(), k);
        assert_eq!(conjugate(&h, &y)?, *x.mat());
        return Ok(Decomposition { h, y, m });
    }
    let sizes = [n + m - 2 * k, k - m, m, k - m];
    let offsets = [0, sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]];
    let w = make_wm(spec, m)?;
    let pulled_back = conjugate(&g.inverse()?, x.mat())?;
    let flipped = w.mul(&pulled_back).mul(&w);
    // With [V, flipped] = [V, t], the shape [[I, 0], [B, -I]] is forced.
    assert_eq!(flipped.block(0..n - k, 0..n - k), Mat::identity(f, n - k));
    assert!(is_zero_mat(&flipped.block(0..n - k, n - k..n)));
    assert_eq!(
        flipped.block(n - k..n, n - k..n),
        Mat::scalar(f, k, f.neg(Elem::ONE))
    );
    let b = flipped.block(n - k..n, 0..n - k);
    let b1 = b.block(0..m, 0..sizes[0]);
    let b2 = b.block(0..m, sizes[0]..n - k);
    let b3 = b.block(m..k, 0..sizes[0]);
    let b4 = b.block(m..k, sizes[0]..n - k);
    let mut y = make_tm(spec, m)?.into_mat();
    y.paste(offsets[1], offsets[3], &b4);
    // Conjugating the sign pattern doubles the off-diagonal blocks, so the
    // clearing unipotent carries halved entries.
    let two = f.add(Elem::ONE, Elem::ONE);
    let half = f.inv(two).expect("2 is invertible away from characteristic two");
    let mut clearing = Mat::identity(f, n);
    clearing.paste(offsets[1], offsets[0], &b3.scalar_mul(half));
    clearing.paste(offsets[2], offsets[0], &b1.scalar_mul(half));
    clearing.paste(offsets[2], offsets[3], &b2.scalar_mul(half));
    let h = g.mul(&clearing);
    assert!(y.is_involution());
    assert_eq!(conjugate(&h, &y)?, *x.mat());
    Ok(Decomposition { h, y, m })
}
