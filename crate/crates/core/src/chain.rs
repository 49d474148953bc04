//! Chain complexes of binary vector spaces: validation, co-complex,
//! homology dimensions, systole/cosystole oracles and CSS-code extraction.

use crate::gf2::{self, BinaryMatrix, BitVector, CosetMin, CosetMode, Echelon, Gf2Error};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("boundary map {p} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    ShapeMismatch {
        p: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("grade {0} out of range for a dimension-{1} complex")]
    BadGrade(usize, usize),
    #[error("boundary-of-boundary is non-zero at grade {p}, face {face}")]
    NotAComplex { p: usize, face: usize },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("bad complex file: {0}")]
    BadFile(String),
}

/// First place where the composition of two boundary maps fails to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub grade: usize,
    pub face: usize,
}

/// A d-dimensional chain complex over GF(2).
///
/// `boundaries[p]` is the boundary map from grade p to grade p-1, for
/// p = 0..=d+1. The two ends are explicit zero-shaped maps (0 x |X_0| and
/// |X_d| x 0) so every grade query is uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    face_counts: Vec<usize>,
    boundaries: Vec<BinaryMatrix>,
}

impl ChainComplex {
    /// Builds from face counts and the interior maps `∂_1..∂_d`, where
    /// `∂_p` has |X_{p-1}| rows and |X_p| columns.
    pub fn new(face_counts: Vec<usize>, interior: Vec<BinaryMatrix>) -> Result<Self, ChainError> {
        assert!(!face_counts.is_empty(), "a complex needs at least grade 0");
        let d = face_counts.len() - 1;
        if interior.len() != d {
            return Err(ChainError::BadFile(format!(
                "expected {d} boundary maps, got {}",
                interior.len()
            )));
        }
        let mut boundaries = Vec::with_capacity(d + 2);
        boundaries.push(BinaryMatrix::zeros(0, face_counts[0]));
        for (p, m) in interior.into_iter().enumerate() {
            let p = p + 1;
            if m.n_rows() != face_counts[p - 1] || m.n_cols() != face_counts[p] {
                return Err(ChainError::ShapeMismatch {
                    p,
                    rows: m.n_rows(),
                    cols: m.n_cols(),
                    want_rows: face_counts[p - 1],
                    want_cols: face_counts[p],
                });
            }
            boundaries.push(m);
        }
        boundaries.push(BinaryMatrix::zeros(face_counts[d], 0));
        Ok(ChainComplex {
            face_counts,
            boundaries,
        })
    }

    pub fn dimension(&self) -> usize {
        self.face_counts.len() - 1
    }

    pub fn face_counts(&self) -> &[usize] {
        &self.face_counts
    }

    pub fn face_count(&self, p: usize) -> usize {
        self.face_counts[p]
    }

    /// The boundary map `∂_p`, valid for p = 0..=d+1.
    pub fn boundary(&self, p: usize) -> &BinaryMatrix {
        &self.boundaries[p]
    }

    /// The coboundary map `δ_p = ∂_{p+1}ᵀ`.
    pub fn coboundary(&self, p: usize) -> BinaryMatrix {
        self.boundaries[p + 1].transpose()
    }

    /// Checks `∂_{p-1}∘∂_p = 0` for all p, reporting the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let d = self.dimension();
        for p in 2..=d {
            // Column f of ∂_p, pushed through ∂_{p-1}: xor the supports of
            // the lower map's columns indexed by the face's boundary.
            let upper_cols = self.boundaries[p].transpose();
            let lower_cols = self.boundaries[p - 1].transpose();
            for face in 0..self.face_counts[p] {
                let mut acc: Vec<u32> = Vec::new();
                for &e in upper_cols.row(face) {
                    acc.extend_from_slice(lower_cols.row(e as usize));
                }
                acc.sort_unstable();
                let mut cancelled = true;
                let mut i = 0;
                while i < acc.len() {
                    if i + 1 < acc.len() && acc[i] == acc[i + 1] {
                        i += 2;
                    } else {
                        cancelled = false;
                        break;
                    }
                }
                if !cancelled {
                    return Err(Violation { grade: p, face });
                }
            }
        }
        Ok(())
    }

    /// The co-complex: grade i of the result is grade d-i of the input,
    /// with transposed maps. Applying it twice gives back the input.
    pub fn cocomplex(&self) -> ChainComplex {
        let d = self.dimension();
        let face_counts: Vec<usize> = self.face_counts.iter().rev().copied().collect();
        let interior: Vec<BinaryMatrix> = (1..=d)
            .map(|i| self.boundaries[d - i + 1].transpose())
            .collect();
        ChainComplex::new(face_counts, interior).expect("co-complex shapes are consistent")
    }

    /// dim ker ∂_p - rank ∂_{p+1}.
    pub fn homology_dim(&self, p: usize) -> usize {
        assert!(p <= self.dimension());
        let z = self.face_counts[p] - gf2::rank(&self.boundaries[p]);
        let b = gf2::rank(&self.boundaries[p + 1]);
        z - b
    }

    pub fn cohomology_dim(&self, p: usize) -> usize {
        self.cocomplex().homology_dim(self.dimension() - p)
    }

    /// Basis of the cycle space Z_p = ker ∂_p.
    pub fn cycle_basis(&self, p: usize) -> Vec<BitVector> {
        gf2::kernel_basis(&self.boundaries[p])
    }

    /// The boundary space B_p = im ∂_{p+1}, as a matrix whose rows span it.
    pub fn boundary_span(&self, p: usize) -> BinaryMatrix {
        self.boundaries[p + 1].transpose()
    }

    pub fn systole(&self, p: usize, budget: u64) -> Result<SystoleReport, ChainError> {
        if p > self.dimension() {
            return Err(ChainError::BadGrade(p, self.dimension()));
        }
        systole_of(
            &self.boundaries[p],
            &self.boundary_span(p),
            self.face_counts[p],
            budget,
        )
    }

    /// Cosystole via the identity S^p(X) = S_{d-p}(X*).
    pub fn cosystole(&self, p: usize, budget: u64) -> Result<SystoleReport, ChainError> {
        if p > self.dimension() {
            return Err(ChainError::BadGrade(p, self.dimension()));
        }
        self.cocomplex().systole(self.dimension() - p, budget)
    }

    /// Extracts the CSS code sitting at grade p: H_X = ∂_p read as checks on
    /// X_p, H_Z = δ_p.
    pub fn css_extract(&self, p: usize, provenance: &str) -> Result<CssCode, ChainError> {
        if p > self.dimension() {
            return Err(ChainError::BadGrade(p, self.dimension()));
        }
        Ok(CssCode {
            n: self.face_counts[p],
            h_x: self.boundaries[p].clone(),
            h_z: self.boundaries[p + 1].transpose(),
            provenance: format!("{provenance} (grade {p})"),
            grade: p,
        })
    }
}

/// Outcome of a systole/cosystole query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SystoleReport {
    /// Minimum weight of a non-trivial cycle, with a witness.
    Value {
        value: usize,
        witness: BitVector,
        mode: CosetMode,
    },
    /// Weight-bounded search exhausted its cap: the systole exceeds it.
    AtLeast { bound: usize },
    /// H_p = 0: no non-trivial cycle exists.
    Undefined,
}

impl SystoleReport {
    pub fn value(&self) -> Option<usize> {
        match self {
            SystoleReport::Value { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Shared systole engine: minimum weight over `ker ∂ \ span(boundary_rows)`.
///
/// Exhaustive mode walks all cosets of B_p inside Z_p (2^dim H_p - 1 coset
/// shifts, Gray enumeration of each); cap mode enumerates low-weight words
/// directly, checking "cycle and not boundary" per word.
fn systole_of(
    boundary_out: &BinaryMatrix,
    boundary_in_span: &BinaryMatrix,
    n_faces: usize,
    budget: u64,
) -> Result<SystoleReport, ChainError> {
    let cycles = gf2::kernel_basis(boundary_out);
    let b_echelon = Echelon::new(boundary_in_span, false);
    let dim_b = b_echelon.rank();
    // Coset representatives of H_p: kernel vectors independent of B_p.
    let mut ext = Echelon::from_packed_rows(n_faces, b_echelon.rows().iter().cloned());
    let mut reps: Vec<BitVector> = Vec::new();
    for k in &cycles {
        if ext.grow(k.clone()) {
            reps.push(k.clone());
        }
    }
    let h_dim = reps.len();
    if h_dim == 0 {
        return Ok(SystoleReport::Undefined);
    }
    let full_cost = if h_dim + dim_b >= 64 {
        u128::MAX
    } else {
        1u128 << (h_dim + dim_b)
    };
    if full_cost <= budget as u128 {
        let mut best: Option<(usize, BitVector)> = None;
        // Gray walk over non-zero combinations of the representatives; for
        // each, Gray walk over the boundary space.
        let mut shift = BitVector::zeros(n_faces);
        for g in 1u64..(1 << h_dim) {
            shift.xor_assign(&reps[g.trailing_zeros() as usize]);
            match gf2::min_weight_coset(boundary_in_span, &shift, n_faces, budget)? {
                CosetMin::Found {
                    weight, witness, ..
                } => {
                    if best.as_ref().is_none_or(|(w, _)| weight < *w) {
                        best = Some((weight, witness));
                    }
                }
                CosetMin::ExceedsCap { .. } => unreachable!("exhaustive mode has no cap"),
            }
        }
        let (value, witness) = best.expect("at least one non-trivial coset");
        return Ok(SystoleReport::Value {
            value,
            witness,
            mode: CosetMode::Exhaustive,
        });
    }
    // Cap mode: enumerate words of weight 1..=cap, cheapest test first.
    let cap = largest_affordable_cap(n_faces, budget);
    if cap == 0 {
        return Err(ChainError::Gf2(Gf2Error::BudgetExceeded {
            required: full_cost,
            budget,
        }));
    }
    let mut indices: Vec<usize>;
    for weight in 1..=cap.min(n_faces) {
        indices = (0..weight).collect();
        loop {
            let v = BitVector::from_support(n_faces, &indices);
            if boundary_out.mul_vec(&v).is_zero() && !b_echelon.contains(&v) {
                return Ok(SystoleReport::Value {
                    value: weight,
                    witness: v,
                    mode: CosetMode::WeightBounded,
                });
            }
            if !gf2::next_combination(&mut indices, n_faces) {
                break;
            }
        }
    }
    Ok(SystoleReport::AtLeast { bound: cap + 1 })
}

fn largest_affordable_cap(n: usize, budget: u64) -> usize {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=n {
        binom = match binom.checked_mul((n - k + 1) as u128) {
            Some(x) => x / k as u128,
            None => return k - 1,
        };
        total = total.saturating_add(binom);
        if total > budget as u128 {
            return k - 1;
        }
    }
    n
}

/// A CSS code: two parity-check matrices with orthogonal row spaces.
#[derive(Debug, Clone)]
pub struct CssCode {
    pub n: usize,
    pub h_x: BinaryMatrix,
    pub h_z: BinaryMatrix,
    pub provenance: String,
    pub grade: usize,
}

impl CssCode {
    /// H_Z · H_Xᵀ = 0, checked entry-free via supports.
    pub fn orthogonal(&self) -> bool {
        let hx_rows: Vec<BitVector> = self.h_x.packed_rows();
        for r in 0..self.h_z.n_rows() {
            let zr = self.h_z.row_as_bitvector(r);
            for xr in &hx_rows {
                if zr.dot(xr) {
                    return false;
                }
            }
        }
        true
    }

    pub fn k(&self) -> usize {
        self.n - gf2::rank(&self.h_x) - gf2::rank(&self.h_z)
    }
}

// ---------------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    dimension: usize,
    face_counts: Vec<usize>,
    /// boundaries[p-1] = sparse triplet list of ∂_p, as [row, col] pairs.
    boundaries: Vec<Vec<(usize, usize)>>,
}

pub fn complex_to_json(x: &ChainComplex) -> String {
    let d = x.dimension();
    let file = ComplexFile {
        dimension: d,
        face_counts: x.face_counts.clone(),
        boundaries: (1..=d).map(|p| x.boundary(p).entries().collect()).collect(),
    };
    serde_json::to_string_pretty(&file).expect("complex serialization cannot fail")
}

pub fn complex_from_json(text: &str) -> Result<ChainComplex, ChainError> {
    let file: ComplexFile =
        serde_json::from_str(text).map_err(|e| ChainError::BadFile(e.to_string()))?;
    if file.face_counts.len() != file.dimension + 1 {
        return Err(ChainError::BadFile(format!(
            "dimension {} does not match {} face counts",
            file.dimension,
            file.face_counts.len()
        )));
    }
    let interior = file
        .boundaries
        .iter()
        .enumerate()
        .map(|(i, entries)| {
            BinaryMatrix::from_entries(
                file.face_counts[i],
                file.face_counts[i + 1],
                entries.iter().copied(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChainComplex::new(file.face_counts, interior)
}
