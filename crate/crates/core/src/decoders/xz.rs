//! The two product-code decoding pipelines.
//!
//! X-errors: per-column cycle-code decoding (T-joins on the component
//! 1-skeleton), then a linear solve for a chain supported on the X1 x A
//! block, a change of basis into a cycle basis Z0 ∪ Z1 of the component,
//! and classical decoding of every Z1 row to strip the component-code
//! codeword it picked up.
//!
//! Z-errors: recover the X2 x B block exactly by inverting the restriction
//! of the syndrome map to the pivot columns A', subtract it, then run the
//! component coboundary decoder on every remaining column.

use super::{
    tjoin_decode, ComponentDecoder, DecodeError, DecodeOutcome, DecodeStatus, LocalDecoder,
};
use crate::classical::select_a_prime;
use crate::gf2::{self, BinaryMatrix, BitVector, Solver};
use crate::graph::Graph;
use crate::product::ProductCode;
use std::collections::BTreeMap;

/// Dense-solve guard: the X pipeline keeps an eliminated copy of the
/// X1 x A system, which is only sensible at desk scale.
const X_DECODER_QUBIT_LIMIT: usize = 1 << 14;

/// A cycle basis of the component complex split as Z0 ∪ Z1, where Z0 spans
/// the boundary space im ∂2 and Z1 completes it to a basis of ker ∂1.
pub struct CycleBasis {
    pub z0: Vec<BitVector>,
    pub z1: Vec<BitVector>,
    coords: Solver,
}

impl CycleBasis {
    pub fn new(x: &crate::chain::ChainComplex) -> CycleBasis {
        let b_echelon = gf2::Echelon::new(&x.boundary_span(1), false);
        let z0: Vec<BitVector> = b_echelon.rows().to_vec();
        let mut ext = gf2::Echelon::from_packed_rows(x.face_count(1), z0.iter().cloned());
        let mut z1 = Vec::new();
        for k in x.cycle_basis(1) {
            if ext.grow(k.clone()) {
                z1.push(k);
            }
        }
        // Columns of the coordinate system are the basis vectors.
        let n = x.face_count(1);
        let mut entries = Vec::new();
        for (j, v) in z0.iter().chain(z1.iter()).enumerate() {
            for i in v.iter_support() {
                entries.push((i, j));
            }
        }
        let m = BinaryMatrix::from_entries(n, z0.len() + z1.len(), entries)
            .expect("basis vectors are in range");
        CycleBasis {
            z0,
            z1,
            coords: Solver::new(&m),
        }
    }

    /// Coordinates of a cycle in the Z0 ∪ Z1 basis (unique).
    pub fn coordinates(&self, cycle: &BitVector) -> Option<BitVector> {
        self.coords.solve(cycle)
    }
}

/// Precomputed state for decoding X-errors of one product code.
pub struct XDecoder<'a> {
    code: &'a ProductCode,
    skeleton: Graph,
    cycle_basis: CycleBasis,
    /// Solver for the grade-0 system restricted to the X1 x A columns.
    ea_solver: Solver,
}

impl<'a> XDecoder<'a> {
    pub fn new(code: &'a ProductCode) -> Result<Self, DecodeError> {
        if code.n_qubits() > X_DECODER_QUBIT_LIMIT {
            return Err(DecodeError::TooLarge(format!(
                "{} qubits; the X pipeline keeps a dense elimination of the \
                 X1 x A system and is desk-scale only",
                code.n_qubits()
            )));
        }
        let x = code.x();
        let d1t = x.boundary(1).transpose();
        let edges: Vec<(usize, usize)> = (0..d1t.n_rows())
            .map(|e| {
                let ends = d1t.row(e);
                assert_eq!(ends.len(), 2, "component 1-skeleton must be a graph");
                (ends[0] as usize, ends[1] as usize)
            })
            .collect();
        let skeleton = Graph::new(x.face_count(0), edges);
        let cycle_basis = CycleBasis::new(x);
        let layout = code.layout();
        let full = code.complex().boundary(1);
        let ea_cols = layout.x1 * layout.a;
        let ea_matrix = BinaryMatrix::from_entries(
            full.n_rows(),
            ea_cols,
            full.entries().filter(|&(_, c)| c < ea_cols),
        )
        .expect("EA block of ∂1");
        Ok(XDecoder {
            code,
            skeleton,
            cycle_basis,
            ea_solver: Solver::new(&ea_matrix),
        })
    }

    pub fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome, DecodeError> {
        let layout = self.code.layout();
        let n = self.code.n_qubits();
        let want = layout.n_grade0();
        if syndrome.len() != want {
            return Err(DecodeError::SyndromeLength {
                got: syndrome.len(),
                want,
            });
        }
        let w0 = syndrome.weight();

        // Step 1: T-join per a-column of the V x A part.
        let mut y_full = BitVector::zeros(n);
        for a in 0..layout.a {
            let odd: Vec<usize> = (0..layout.x0)
                .filter(|&v| syndrome.get(layout.va(v, a)))
                .collect();
            if odd.is_empty() {
                continue;
            }
            let join = tjoin_decode(&self.skeleton, &odd)?;
            for e in join.iter_support() {
                y_full.flip(layout.ea(e, a));
            }
        }

        // Residual syndrome has zero V x A part by construction.
        let mut residual = syndrome.clone();
        residual.xor_assign(&self.code.sigma_x(&y_full));
        for v in 0..layout.x0 {
            for a in 0..layout.a {
                debug_assert!(!residual.get(layout.va(v, a)));
            }
        }

        // Step 2: any chain on X1 x A with this syndrome. Because the V x A
        // syndrome part is zero, every a-column of a solution is a cycle.
        let Some(z) = self.ea_solver.solve(&residual) else {
            return Err(DecodeError::Inconsistent(
                "no X1 x A chain matches the residual syndrome".into(),
            ));
        };

        // Step 3: express each column in the cycle basis.
        let n_basis = self.cycle_basis.z0.len() + self.cycle_basis.z1.len();
        let mut coords_by_a: Vec<BitVector> = Vec::with_capacity(layout.a);
        for a in 0..layout.a {
            let mut col = BitVector::zeros(layout.x1);
            for x1 in 0..layout.x1 {
                if z.get(layout.ea(x1, a)) {
                    col.set(x1, true);
                }
            }
            let c = self
                .cycle_basis
                .coordinates(&col)
                .expect("solution columns are cycles");
            debug_assert_eq!(c.len(), n_basis);
            coords_by_a.push(c);
        }

        // Step 4: every Z1 row is (sparse row of the true chain) + codeword
        // of the component code; strip the codeword by word decoding.
        let n_z0 = self.cycle_basis.z0.len();
        let mut corrected_rows: Vec<BitVector> = Vec::new();
        for j in 0..self.cycle_basis.z1.len() {
            let mut row = BitVector::zeros(layout.a);
            for a in 0..layout.a {
                if coords_by_a[a].get(n_z0 + j) {
                    row.set(a, true);
                }
            }
            match self.code.y().decode_word(&row) {
                Some(err_part) => corrected_rows.push(err_part),
                None => {
                    return Ok(DecodeOutcome::stalled(n, 0, vec![w0]));
                }
            }
        }

        // Step 5: reassemble. Z0 rows stay; Z1 rows are replaced by their
        // stripped sparse parts.
        let mut correction = y_full;
        for (i, z0v) in self.cycle_basis.z0.iter().enumerate() {
            for a in 0..layout.a {
                if coords_by_a[a].get(i) {
                    for x1 in z0v.iter_support() {
                        correction.flip(layout.ea(x1, a));
                    }
                }
            }
        }
        for (j, z1v) in self.cycle_basis.z1.iter().enumerate() {
            for a in corrected_rows[j].iter_support() {
                for x1 in z1v.iter_support() {
                    correction.flip(layout.ea(x1, a));
                }
            }
        }
        let check = self.code.sigma_x(&correction);
        assert_eq!(
            &check, syndrome,
            "X correction must reproduce the input syndrome"
        );
        Ok(DecodeOutcome {
            correction,
            status: DecodeStatus::Success,
            iterations: 1,
            syndrome_weights: vec![w0, 0],
        })
    }
}

/// One-shot convenience wrapper; builds the decoder state per call.
pub fn x_decode(code: &ProductCode, syndrome: &BitVector) -> Result<DecodeOutcome, DecodeError> {
    XDecoder::new(code)?.decode(syndrome)
}

/// Precomputed state for decoding Z-errors of one product code.
pub struct ZDecoder<'a> {
    code: &'a ProductCode,
    pub a_prime: Vec<usize>,
    pub a_second: Vec<usize>,
    /// Inverse of the |B| x |B| restriction δ_{B->A'}: rows indexed by B,
    /// columns by positions in a_prime.
    inv_restriction: BinaryMatrix,
    local: LocalDecoder,
    component: ComponentDecoder,
}

impl<'a> ZDecoder<'a> {
    pub fn new(code: &'a ProductCode, component: ComponentDecoder) -> Self {
        let (a_prime, a_second) = select_a_prime(code.y());
        let b = code.y().n_checks();
        // Restriction matrix M: rows = positions in A', columns = B.
        let h_cols = code.y().h().transpose();
        let mut entries = Vec::new();
        for (i, &a) in a_prime.iter().enumerate() {
            for &bb in h_cols.row(a) {
                entries.push((i, bb as usize));
            }
        }
        let m = BinaryMatrix::from_entries(a_prime.len(), b, entries).expect("restriction");
        let solver = Solver::new(&m);
        // Invert column by column.
        let mut inv_rows: Vec<Vec<u32>> = vec![Vec::new(); b];
        for i in 0..a_prime.len() {
            let unit = BitVector::from_support(a_prime.len(), &[i]);
            let col = solver
                .solve(&unit)
                .expect("A' restriction is invertible by pivot choice");
            for r in col.iter_support() {
                inv_rows[r].push(i as u32);
            }
        }
        let inv_restriction =
            BinaryMatrix::from_rows(b, a_prime.len(), inv_rows).expect("inverse restriction");
        ZDecoder {
            code,
            a_prime,
            a_second,
            inv_restriction,
            local: LocalDecoder::new(code.x()),
            component,
        }
    }

    pub fn local_decoder(&self) -> &LocalDecoder {
        &self.local
    }

    pub fn code(&self) -> &ProductCode {
        self.code
    }

    /// Z syndrome of a sparse error, as a sorted support over X2 x A.
    pub fn sparse_sigma_z(&self, support: &[usize]) -> Vec<usize> {
        let d2 = self.code.complex().boundary(2);
        let mut acc: BTreeMap<usize, bool> = BTreeMap::new();
        for &q in support {
            for &ta in d2.row(q) {
                *acc.entry(ta as usize).or_insert(false) ^= true;
            }
        }
        acc.into_iter()
            .filter_map(|(t, odd)| odd.then_some(t))
            .collect()
    }

    /// Decodes from the support of a Z syndrome (entries of F2^{X2 x A}).
    pub fn decode_support(&self, syndrome: &[usize]) -> Result<DecodeOutcome, DecodeError> {
        let layout = self.code.layout();
        let n = self.code.n_qubits();
        let w0 = syndrome.len();
        let mut a_prime_pos = vec![usize::MAX; layout.a];
        for (i, &a) in self.a_prime.iter().enumerate() {
            a_prime_pos[a] = i;
        }

        // Group the syndrome by triangle; the A' part determines the
        // X2 x B block exactly.
        let mut by_triangle: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &ta in syndrome {
            if ta >= layout.n_grade2() {
                return Err(DecodeError::SyndromeLength {
                    got: ta,
                    want: layout.n_grade2(),
                });
            }
            by_triangle
                .entry(ta / layout.a)
                .or_default()
                .push(ta % layout.a);
        }
        let mut tb_block: Vec<usize> = Vec::new();
        for (&t, cols) in &by_triangle {
            let mut restricted = BitVector::zeros(self.a_prime.len());
            for &a in cols {
                if a_prime_pos[a] != usize::MAX {
                    restricted.set(a_prime_pos[a], true);
                }
            }
            if restricted.is_zero() {
                continue;
            }
            let w = self.inv_restriction.mul_vec(&restricted);
            for bb in w.iter_support() {
                tb_block.push(layout.tb(t, bb));
            }
        }

        // Subtract the recovered block's syndrome.
        let mut residual: BTreeMap<usize, bool> = syndrome.iter().map(|&t| (t, true)).collect();
        let d2 = self.code.complex().boundary(2);
        for &q in &tb_block {
            for &ta in d2.row(q) {
                *residual.entry(ta as usize).or_insert(false) ^= true;
            }
        }
        let residual: Vec<usize> = residual
            .into_iter()
            .filter_map(|(t, odd)| odd.then_some(t))
            .collect();

        // The rest must live on A'' columns.
        let mut by_column: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &ta in &residual {
            let (t, a) = (ta / layout.a, ta % layout.a);
            if a_prime_pos[a] != usize::MAX {
                return Err(DecodeError::Inconsistent(format!(
                    "residual Z syndrome touches pivot column a={a}"
                )));
            }
            by_column.entry(a).or_default().push(t);
        }

        // Component coboundary decoding per remaining column.
        let mut correction = BitVector::zeros(n);
        for &q in &tb_block {
            correction.set(q, true);
        }
        let mut iterations = 0;
        let mut weights = vec![w0];
        for (a, tris) in by_column {
            let f = BitVector::from_support(layout.x2, &tris);
            let out = match self.component {
                ComponentDecoder::LocalCoboundary => self.local.decode(&f)?,
                ComponentDecoder::SingleEdge => self.local.decode_single_edge(&f)?,
            };
            iterations += out.iterations;
            if !out.is_success() {
                weights.extend(out.syndrome_weights.last().copied());
                return Ok(DecodeOutcome::stalled(n, iterations, weights));
            }
            for e in out.correction.iter_support() {
                correction.set(layout.ea(e, a), true);
            }
        }
        weights.push(0);

        // Syndrome consistency, sparse.
        let check = self.sparse_sigma_z(&correction.support());
        assert_eq!(check, syndrome, "Z correction must reproduce the syndrome");
        Ok(DecodeOutcome {
            correction,
            status: DecodeStatus::Success,
            iterations,
            syndrome_weights: weights,
        })
    }

    pub fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome, DecodeError> {
        let want = self.code.layout().n_grade2();
        if syndrome.len() != want {
            return Err(DecodeError::SyndromeLength {
                got: syndrome.len(),
                want,
            });
        }
        self.decode_support(&syndrome.support())
    }

    /// Equivalent error whose X1 x A block avoids the pivot columns A'.
    /// Simulation-side utility: needs the true error, not a syndrome.
    pub fn reduce(&self, error: &BitVector) -> BitVector {
        let layout = self.code.layout();
        let h = self.code.y().h();
        let d2x = self.code.x().boundary(2);
        let mut a_prime_pos = vec![usize::MAX; layout.a];
        for (i, &a) in self.a_prime.iter().enumerate() {
            a_prime_pos[a] = i;
        }
        let mut out = error.clone();
        // For each (e, a') in the X1 x A' part, add the coboundary image of
        // e ⊗ B_{a'}, where δ_{B->A'}(B_{a'}) = {a'}.
        for x1 in 0..layout.x1 {
            for (i, &a) in self.a_prime.iter().enumerate() {
                if !error.get(layout.ea(x1, a)) {
                    continue;
                }
                let unit = BitVector::from_support(self.a_prime.len(), &[i]);
                let b_set = self.inv_restriction.mul_vec(&unit);
                for b in b_set.iter_support() {
                    // EA part: e ⊗ δ_{B->A}(b) = row b of H.
                    for &aa in h.row(b) {
                        out.flip(layout.ea(x1, aa as usize));
                    }
                    // TB part: δ_{E->T}(e) ⊗ b.
                    for &t in d2x.row(x1) {
                        out.flip(layout.tb(t as usize, b));
                    }
                }
            }
        }
        out
    }
}

/// One-shot wrappers matching the operation names.
pub fn z_decode(
    code: &ProductCode,
    syndrome: &BitVector,
    component: ComponentDecoder,
) -> Result<DecodeOutcome, DecodeError> {
    ZDecoder::new(code, component).decode(syndrome)
}

pub fn z_reduce(code: &ProductCode, error: &BitVector) -> BitVector {
    ZDecoder::new(code, ComponentDecoder::LocalCoboundary).reduce(error)
}
