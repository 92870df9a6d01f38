//! Subset states and their semi-classical isometric encodings.
//!
//! A [`SubsetState`] over `S ⊆ {0,1}^n` is `|S⟩ = |S|^{-1/2} Σ_{x∈S} |x⟩`.
//! Attaching a single-qubit isometry `V_j : C² → (C²)^{⊗m_j}` to each
//! coordinate gives the encoded state `|S|^{-1/2} Σ_x ⊗_j V_j|x_j⟩` on
//! `M = Σ_j m_j` qubits. Coordinate `j` owns the output qubits
//! `offset_j .. offset_j + m_j`, with `offset_j = Σ_{i<j} m_i`.
//!
//! Because each `V_j` preserves the orthogonality of `|0⟩` and `|1⟩`, the
//! images of distinct members are orthogonal and the encoded state is always
//! normalised.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{format_bits, parse_bits_exact, Bits, MAX_LABEL_QUBITS};
use crate::circuit::Gate;
use crate::error::StateError;

/// Largest number of output qubits a single coordinate may expand into.
pub const ISOMETRY_QUBIT_CAP: usize = 3;

/// Tolerance for the column-orthonormality check.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Largest encoded width [`SubsetState::to_dense`] will expand by default.
pub const DENSE_QUBIT_CAP: usize = 24;

const SAMPLE_CHUNK: usize = 4096;

/// A single-qubit isometry `C² → (C²)^{⊗m}` stored as a `2^m × 2` row-major
/// matrix. Row `r` is the output basis state whose bit `k` is output qubit `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    out_qubits: usize,
    matrix: Vec<Complex64>,
}

impl Isometry {
    pub fn new(out_qubits: usize, matrix: Vec<Complex64>) -> Result<Self, StateError> {
        Self::with_coordinate(0, out_qubits, matrix)
    }

    fn with_coordinate(
        coordinate: usize,
        out_qubits: usize,
        matrix: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        if out_qubits == 0 || out_qubits > ISOMETRY_QUBIT_CAP {
            return Err(StateError::IsometryTooWide {
                got: out_qubits,
                cap: ISOMETRY_QUBIT_CAP,
            });
        }
        let rows = 1usize << out_qubits;
        if matrix.len() != 2 * rows {
            return Err(StateError::Syntax {
                line: 0,
                message: format!(
                    "isometry on {out_qubits} output qubits needs {} entries, got {}",
                    2 * rows,
                    matrix.len()
                ),
            });
        }
        let iso = Isometry { out_qubits, matrix };
        let mut deviation = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                let inner: Complex64 = (0..rows)
                    .map(|r| iso.entry(r, a).conj() * iso.entry(r, b))
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                deviation = deviation.max((inner - expected).norm());
            }
        }
        if deviation > ISOMETRY_TOL {
            return Err(StateError::NotIsometry {
                coordinate,
                deviation,
            });
        }
        Ok(iso)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Isometry {
            out_qubits: 1,
            matrix: vec![one, zero, zero, one],
        }
    }

    /// Hadamard: `|0⟩ ↦ |+⟩`, `|1⟩ ↦ |−⟩`.
    pub fn plus_encoder() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Isometry {
            out_qubits: 1,
            matrix: vec![h, h, h, -h],
        }
    }

    pub fn out_qubits(&self) -> usize {
        self.out_qubits
    }

    pub fn rows(&self) -> usize {
        1 << self.out_qubits
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    #[inline]
    pub fn entry(&self, row: usize, input: usize) -> Complex64 {
        self.matrix[2 * row + input]
    }

    pub fn is_identity(&self) -> bool {
        self.out_qubits == 1 && self.matrix == Isometry::identity().matrix
    }

    /// True when both images `V|0⟩` and `V|1⟩` are themselves subset states:
    /// every non-zero amplitude of a column equals the same positive real.
    pub fn has_uniform_images(&self) -> bool {
        (0..2).all(|input| {
            let support: Vec<Complex64> = (0..self.rows())
                .map(|r| self.entry(r, input))
                .filter(|a| a.norm() > ISOMETRY_TOL)
                .collect();
            let expected = 1.0 / (support.len() as f64).sqrt();
            support
                .iter()
                .all(|a| (a.re - expected).abs() <= ISOMETRY_TOL && a.im.abs() <= ISOMETRY_TOL)
        })
    }
}

/// Inner product `⟨a|b⟩` together with `|⟨a|b⟩|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub amplitude: Complex64,
    pub probability: f64,
}

impl Overlap {
    fn from_amplitude(amplitude: Complex64) -> Self {
        Overlap {
            amplitude,
            probability: amplitude.norm_sqr(),
        }
    }
}

/// A (possibly encoded) subset state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetState {
    n: usize,
    members: Vec<Bits>,
    isometries: Vec<Isometry>,
}

impl SubsetState {
    /// Builds a state from members (any order, no repeats) and one isometry per
    /// coordinate.
    pub fn new(
        n: usize,
        members: Vec<Bits>,
        isometries: Vec<Isometry>,
    ) -> Result<Self, StateError> {
        if n > MAX_LABEL_QUBITS {
            return Err(StateError::TooManyQubits(n));
        }
        if isometries.len() != n {
            return Err(StateError::IsometryCount {
                expected: n,
                got: isometries.len(),
            });
        }
        if members.is_empty() {
            return Err(StateError::NoMembers);
        }
        let mut members = members;
        members.sort_unstable();
        let limit_mask = crate::bits::low_mask(n);
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(StateError::DuplicateMember(format_bits(w[0], n)));
            }
        }
        if let Some(&bad) = members.iter().find(|&&x| x & !limit_mask != 0) {
            return Err(StateError::MemberLength {
                member: format!("{bad:b}"),
                expected: n,
                got: (MAX_LABEL_QUBITS as u32 - bad.leading_zeros()) as usize,
            });
        }
        Ok(SubsetState {
            n,
            members,
            isometries,
        })
    }

    /// Plain subset state: every coordinate carries the identity.
    pub fn from_members(n: usize, members: Vec<Bits>) -> Result<Self, StateError> {
        Self::new(n, members, vec![Isometry::identity(); n])
    }

    /// Parses members from bit strings (qubit 0 first).
    pub fn from_strings<S: AsRef<str>>(n: usize, members: &[S]) -> Result<Self, StateError> {
        let labels = members
            .iter()
            .map(|s| {
                let s = s.as_ref();
                parse_bits_exact(s, n).map_err(|_| StateError::MemberLength {
                    member: s.to_string(),
                    expected: n,
                    got: s.chars().count(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_members(n, labels)
    }

    /// Replaces the isometry on one coordinate.
    pub fn with_isometry(mut self, coordinate: usize, iso: Isometry) -> Result<Self, StateError> {
        if coordinate >= self.n {
            return Err(StateError::QubitRange {
                qubit: coordinate,
                n: self.n,
            });
        }
        self.isometries[coordinate] = iso;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Bits] {
        &self.members
    }

    /// `|S|`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn isometries(&self) -> &[Isometry] {
        &self.isometries
    }

    /// Total encoded width `M = Σ_j m_j`.
    pub fn encoded_qubits(&self) -> usize {
        self.isometries.iter().map(Isometry::out_qubits).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.isometries
            .iter()
            .scan(0, |acc, iso| {
                let here = *acc;
                *acc += iso.out_qubits();
                Some(here)
            })
            .collect()
    }

    /// No coordinate is encoded.
    pub fn is_plain(&self) -> bool {
        self.isometries.iter().all(Isometry::is_identity)
    }

    /// Every isometry image is itself a subset state, so the encoded state is
    /// again a (larger) subset state.
    pub fn has_uniform_images(&self) -> bool {
        self.isometries.iter().all(Isometry::has_uniform_images)
    }

    /// Semi-classical with respect to a caller-supplied polynomial budget.
    pub fn is_semi_classical(&self, budget: usize) -> bool {
        self.len() <= budget
    }

    /// Amplitude of every member branch, `1/√|S|`.
    pub fn member_amplitude(&self) -> f64 {
        1.0 / (self.len() as f64).sqrt()
    }

    /// `R(S)` for a reversible gate acting only on identity coordinates.
    pub fn apply_gate(&self, gate: &Gate) -> Result<Self, StateError> {
        for &q in gate.qubits() {
            if q >= self.n {
                return Err(StateError::QubitRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        for &q in gate.support() {
            if !self.isometries[q].is_identity() {
                return Err(StateError::EncodedCoordinate(q));
            }
        }
        let mut members: Vec<Bits> = self.members.iter().map(|&x| gate.apply(x)).collect();
        members.sort_unstable();
        Ok(SubsetState {
            n: self.n,
            members,
            isometries: self.isometries.clone(),
        })
    }

    /// `|a⟩ ⊗ |b⟩`: members are `S × T` with `b`'s coordinates after `a`'s.
    pub fn tensor(&self, other: &SubsetState) -> Result<Self, StateError> {
        let n = self.n + other.n;
        if n > MAX_LABEL_QUBITS {
            return Err(StateError::TooManyQubits(n));
        }
        let mut members = Vec::with_capacity(self.len() * other.len());
        for &y in &other.members {
            for &x in &self.members {
                members.push(x | (y << self.n));
            }
        }
        // y-major iteration with x sorted keeps the concatenation sorted
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut isometries = self.isometries.clone();
        isometries.extend(other.isometries.iter().cloned());
        Ok(SubsetState {
            n,
            members,
            isometries,
        })
    }

    /// Exact amplitude `⟨z|S_V⟩` of an encoded basis state `z`.
    pub fn amplitude(&self, z: Bits) -> Complex64 {
        let offsets = self.offsets();
        let norm = self.member_amplitude();
        self.members
            .iter()
            .map(|&x| {
                self.isometries.iter().zip(&offsets).enumerate().fold(
                    Complex64::new(norm, 0.0),
                    |acc, (j, (iso, &off))| {
                        if acc == Complex64::new(0.0, 0.0) {
                            return acc;
                        }
                        let row = ((z >> off) as usize) & (iso.rows() - 1);
                        acc * iso.entry(row, ((x >> j) & 1) as usize)
                    },
                )
            })
            .sum()
    }

    /// Dense amplitude vector on `2^M` entries (bit `k` of the index is
    /// encoded qubit `k`).
    pub fn to_dense(&self, qubit_cap: usize) -> Result<Vec<Complex64>, StateError> {
        let width = self.encoded_qubits();
        if width > qubit_cap || width >= usize::BITS as usize {
            return Err(StateError::DenseCap(width));
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); 1usize << width];
        let offsets = self.offsets();
        let norm = Complex64::new(self.member_amplitude(), 0.0);
        for &x in &self.members {
            let mut branch = vec![(0usize, norm)];
            for (j, (iso, &off)) in self.isometries.iter().zip(&offsets).enumerate() {
                let input = ((x >> j) & 1) as usize;
                let mut next = Vec::with_capacity(branch.len() * iso.rows());
                for &(idx, amp) in &branch {
                    for row in 0..iso.rows() {
                        let v = iso.entry(row, input);
                        if v != Complex64::new(0.0, 0.0) {
                            next.push((idx | (row << off), amp * v));
                        }
                    }
                }
                branch = next;
            }
            for (idx, amp) in branch {
                psi[idx] += amp;
            }
        }
        Ok(psi)
    }

    /// Compact text size of the description, in bytes.
    pub fn description_len(&self) -> usize {
        self.to_text().len()
    }

    /// Draws `shots` encoded basis states from `|⟨z|S_V⟩|²`.
    ///
    /// Coordinates are sampled one block at a time from their exact
    /// conditional distribution. Because `V_j|0⟩ ⊥ V_j|1⟩`, the marginal of
    /// blocks `0..=j` only couples members that agree on every coordinate
    /// after `j`, and such members are contiguous in sorted order. Shots are
    /// split into fixed chunks, each with its own ChaCha stream, so the output
    /// depends only on `seed`.
    pub fn sample(&self, shots: usize, seed: u64) -> Vec<Bits> {
        let chunks = shots.div_ceil(SAMPLE_CHUNK);
        let offsets = self.offsets();
        let plain = self.is_plain();
        (0..chunks)
            .into_par_iter()
            .flat_map_iter(|chunk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk as u64);
                let count = SAMPLE_CHUNK.min(shots - chunk * SAMPLE_CHUNK);
                (0..count)
                    .map(|_| {
                        if plain {
                            self.members[rng.random_range(0..self.len())]
                        } else {
                            self.sample_one(&mut rng, &offsets)
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng, offsets: &[usize]) -> Bits {
        // (member, partial amplitude) for members still compatible with the
        // blocks sampled so far
        let mut alive: Vec<(Bits, Complex64)> = self
            .members
            .iter()
            .map(|&x| (x, Complex64::new(1.0, 0.0)))
            .collect();
        let mut z: Bits = 0;
        for (j, iso) in self.isometries.iter().enumerate() {
            let rows = iso.rows();
            let mut weights = vec![0.0f64; rows];
            let mut start = 0;
            while start < alive.len() {
                let key = alive[start].0 >> (j + 1);
                let mut end = start + 1;
                while end < alive.len() && alive[end].0 >> (j + 1) == key {
                    end += 1;
                }
                for (row, w) in weights.iter_mut().enumerate() {
                    let s: Complex64 = alive[start..end]
                        .iter()
                        .map(|&(x, a)| a * iso.entry(row, ((x >> j) & 1) as usize))
                        .sum();
                    *w += s.norm_sqr();
                }
                start = end;
            }
            let total: f64 = weights.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut row = rows - 1;
            for (r, &w) in weights.iter().enumerate() {
                if u < w {
                    row = r;
                    break;
                }
                u -= w;
            }
            z |= (row as Bits) << offsets[j];
            alive.retain_mut(|(x, a)| {
                *a *= iso.entry(row, ((*x >> j) & 1) as usize);
                a.norm_sqr() > 0.0
            });
        }
        z
    }

    /// Exact output distribution as `(z, probability)` pairs, by dense expansion.
    pub fn distribution(&self, qubit_cap: usize) -> Result<Vec<(Bits, f64)>, StateError> {
        Ok(self
            .to_dense(qubit_cap)?
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(z, a)| (z as Bits, a.norm_sqr()))
            .collect())
    }

    /// Text form:
    ///
    /// ```text
    /// n=2
    /// member 01
    /// member 10
    /// iso 0 1 0.7071067811865476,0 0.7071067811865476,0 0.7071067811865476,0 -0.7071067811865476,0
    /// ```
    ///
    /// `iso <coordinate> <out_qubits>` lists the `2^m × 2` matrix row-major
    /// as `re,im` pairs; coordinates without an `iso` line are identity.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for &x in &self.members {
            let _ = writeln!(out, "member {}", format_bits(x, self.n));
        }
        for (j, iso) in self.isometries.iter().enumerate() {
            if iso.is_identity() {
                continue;
            }
            let _ = write!(out, "iso {j} {}", iso.out_qubits());
            for v in iso.matrix() {
                let _ = write!(out, " {:?},{:?}", v.re, v.im);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, StateError> {
        let syntax = |line: usize, message: String| StateError::Syntax { line, message };
        let mut n: Option<usize> = None;
        let mut members = Vec::new();
        let mut isos: Vec<(usize, usize, Isometry)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(value) = line.strip_prefix("n=") {
                n = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| syntax(lineno, format!("invalid qubit count {value:?}")))?,
                );
                continue;
            }
            let width = n.ok_or_else(|| syntax(lineno, "n= must come first".into()))?;
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("member") => {
                    let s = tokens
                        .next()
                        .ok_or_else(|| syntax(lineno, "member needs a bit string".into()))?;
                    let bits =
                        parse_bits_exact(s, width).map_err(|_| StateError::MemberLength {
                            member: s.to_string(),
                            expected: width,
                            got: s.chars().count(),
                        })?;
                    members.push(bits);
                }
                Some("iso") => {
                    let mut int = |what: &str| -> Result<usize, StateError> {
                        tokens
                            .next()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| syntax(lineno, format!("iso needs {what}")))
                    };
                    let coordinate = int("a coordinate")?;
                    let out_qubits = int("an output width")?;
                    let entries = tokens
                        .map(|t| {
                            parse_complex(t)
                                .ok_or_else(|| syntax(lineno, format!("invalid entry {t:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let iso = Isometry::with_coordinate(coordinate, out_qubits, entries).map_err(
                        |e| match e {
                            StateError::Syntax { message, .. } => syntax(lineno, message),
                            other => other,
                        },
                    )?;
                    isos.push((lineno, coordinate, iso));
                }
                other => {
                    return Err(syntax(lineno, format!("unexpected line start {other:?}")));
                }
            }
        }
        let n = n.ok_or_else(|| syntax(0, "missing n=".into()))?;
        let mut isometries = vec![Isometry::identity(); n];
        for (_, coordinate, iso) in isos {
            if coordinate >= n {
                return Err(StateError::QubitRange {
                    qubit: coordinate,
                    n,
                });
            }
            isometries[coordinate] = iso;
        }
        SubsetState::new(n, members, isometries)
    }
}

fn parse_complex(token: &str) -> Option<Complex64> {
    let (re, im) = token.split_once(',').unwrap_or((token, "0"));
    Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
}

/// Unary clock label `1^t 0^{K−t}` as an integer.
#[inline]
pub fn clock_label(t: usize) -> Bits {
    crate::bits::low_mask(t)
}

/// History subset state over `⋃_t (R_t⋯R_1(S)) × {1^t 0^{K−t}}` on
/// `n + K` coordinates, with `t` ranging over `1..=K`, or `0..=K` when
/// `include_t0` is set. Clock coordinates carry identity isometries.
pub fn build_history_subset(
    s0: &SubsetState,
    gates: &[Gate],
    include_t0: bool,
) -> Result<SubsetState, StateError> {
    let k = gates.len();
    let n_total = s0.n + k;
    if n_total > MAX_LABEL_QUBITS {
        return Err(StateError::TooManyQubits(n_total));
    }
    let slices = if include_t0 { k + 1 } else { k };
    let mut members = Vec::with_capacity(s0.len() * slices);
    let mut current = s0.clone();
    if include_t0 {
        members.extend(current.members.iter().copied());
    }
    for (idx, gate) in gates.iter().enumerate() {
        current = current.apply_gate(gate)?;
        let clock = clock_label(idx + 1) << s0.n;
        members.extend(current.members.iter().map(|&x| x | clock));
    }
    let mut isometries = s0.isometries.clone();
    isometries.extend(std::iter::repeat_n(Isometry::identity(), k));
    SubsetState::new(n_total, members, isometries)
}

/// `⟨a|b⟩` for two encoded subset states.
///
/// Plain states reduce to `|A∩B|/√(|A||B|)`. States with the same block
/// layout use the per-coordinate Gram matrices `⟨V^a_j x|V^b_j y⟩`; other
/// pairs fall back to dense expansion under [`DENSE_QUBIT_CAP`].
pub fn overlap(a: &SubsetState, b: &SubsetState) -> Result<Overlap, StateError> {
    let (ma, mb) = (a.encoded_qubits(), b.encoded_qubits());
    if ma != mb {
        return Err(StateError::DimensionMismatch {
            left: ma,
            right: mb,
        });
    }
    let norm = a.member_amplitude() * b.member_amplitude();
    if a.n == b.n && a.is_plain() && b.is_plain() {
        let common = sorted_intersection(&a.members, &b.members);
        return Ok(Overlap::from_amplitude(Complex64::new(
            common as f64 * norm,
            0.0,
        )));
    }
    let same_layout = a.n == b.n
        && a.isometries
            .iter()
            .zip(&b.isometries)
            .all(|(x, y)| x.out_qubits() == y.out_qubits());
    if same_layout {
        let gram: Vec<[[Complex64; 2]; 2]> = a
            .isometries
            .iter()
            .zip(&b.isometries)
            .map(|(va, vb)| {
                let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
                for (x, row) in g.iter_mut().enumerate() {
                    for (y, cell) in row.iter_mut().enumerate() {
                        *cell = (0..va.rows())
                            .map(|r| va.entry(r, x).conj() * vb.entry(r, y))
                            .sum();
                    }
                }
                g
            })
            .collect();
        let total: Complex64 = a
            .members
            .par_iter()
            .map(|&x| {
                b.members
                    .iter()
                    .map(|&y| {
                        let mut acc = Complex64::new(1.0, 0.0);
                        for (j, g) in gram.iter().enumerate() {
                            acc *= g[((x >> j) & 1) as usize][((y >> j) & 1) as usize];
                            if acc == Complex64::new(0.0, 0.0) {
                                break;
                            }
                        }
                        acc
                    })
                    .sum::<Complex64>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum();
        return Ok(Overlap::from_amplitude(total * norm));
    }
    let da = a.to_dense(DENSE_QUBIT_CAP)?;
    let db = b.to_dense(DENSE_QUBIT_CAP)?;
    overlap_vectors(&da, &db)
}

/// `⟨a|ψ⟩` against a dense vector on the encoded space.
pub fn overlap_dense(a: &SubsetState, psi: &[Complex64]) -> Result<Overlap, StateError> {
    let width = a.encoded_qubits();
    if width >= usize::BITS as usize || psi.len() != 1usize << width {
        return Err(StateError::DimensionMismatch {
            left: width,
            right: psi.len().trailing_zeros() as usize,
        });
    }
    let da = a.to_dense(width)?;
    overlap_vectors(&da, psi)
}

fn overlap_vectors(a: &[Complex64], b: &[Complex64]) -> Result<Overlap, StateError> {
    if a.len() != b.len() {
        return Err(StateError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let amp = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    Ok(Overlap::from_amplitude(amp))
}

fn sorted_intersection(a: &[Bits], b: &[Bits]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
