//! Classical component codes as bipartite incidence structures (A, B):
//! path/repetition codes, random biregular LDPC with redundancy removal,
//! greedy bit-flip decoding and the pivot-column split A = A' ∪ A''.

use crate::gf2::{self, BinaryMatrix, BitVector, Echelon};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("path code needs m >= 2, got {0}")]
    PathTooShort(usize),
    #[error("infeasible degree sequence: {n} * {dv} is not divisible by {dc}")]
    InfeasibleDegrees { n: usize, dv: usize, dc: usize },
    #[error("check matrix has rank {rank} < {rows} rows (redundant rows present)")]
    RedundantRows { rank: usize, rows: usize },
    #[error("syndrome length {0} does not match check count {1}")]
    SyndromeLength(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeKind {
    /// Edge-vertex incidence of a path: the repetition code, k = 1, d = |A|.
    Path,
    /// Seeded random (dv, dc)-biregular construction.
    Ldpc,
    /// Anything loaded from a file.
    Custom,
}

/// A classical code presented by a full-row-rank |B| x |A| check matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipartiteCode {
    h: BinaryMatrix,
    kind: CodeKind,
    /// Claimed correctable weight; 0 means unknown. Never exceeds (d-1)/2
    /// once the distance is known.
    decoder_radius: usize,
}

impl BipartiteCode {
    pub fn new(
        h: BinaryMatrix,
        kind: CodeKind,
        decoder_radius: usize,
    ) -> Result<Self, ClassicalError> {
        let rank = gf2::rank(&h);
        if rank != h.n_rows() {
            return Err(ClassicalError::RedundantRows {
                rank,
                rows: h.n_rows(),
            });
        }
        Ok(BipartiteCode {
            h,
            kind,
            decoder_radius,
        })
    }

    pub fn h(&self) -> &BinaryMatrix {
        &self.h
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    /// |A|, the code length.
    pub fn n_bits(&self) -> usize {
        self.h.n_cols()
    }

    /// |B|, the check count.
    pub fn n_checks(&self) -> usize {
        self.h.n_rows()
    }

    pub fn k(&self) -> usize {
        // rank(H) = |B| by construction.
        self.n_bits() - self.n_checks()
    }

    pub fn decoder_radius(&self) -> usize {
        self.decoder_radius
    }

    pub fn syndrome(&self, word: &BitVector) -> BitVector {
        self.h.mul_vec(word)
    }

    /// Basis of the codeword space ker H.
    pub fn codeword_basis(&self) -> Vec<BitVector> {
        gf2::kernel_basis(&self.h)
    }

    /// Exact minimum distance by enumerating the 2^k - 1 non-zero codewords
    /// (Gray walk); None when the budget refuses or k = 0.
    pub fn brute_force_distance(&self, budget: u64) -> Option<usize> {
        let basis = self.codeword_basis();
        let k = basis.len();
        if k == 0 || k >= 64 || (1u128 << k) > budget as u128 {
            return None;
        }
        let mut current = BitVector::zeros(self.n_bits());
        let mut best = usize::MAX;
        for g in 1u64..(1 << k) {
            current.xor_assign(&basis[g.trailing_zeros() as usize]);
            best = best.min(current.weight());
        }
        Some(best)
    }

    /// Syndrome decoding under the code's contract decoder: exact majority
    /// for path codes (complete decoding of the repetition code), greedy
    /// bit-flip otherwise. Returns e with H e = syndrome, or None on stall.
    pub fn decode_syndrome(&self, syndrome: &BitVector) -> Option<BitVector> {
        match self.kind {
            CodeKind::Path => self.majority_decode(syndrome),
            _ => bitflip_decode(self, syndrome, usize::MAX),
        }
    }

    /// Word decoding: the input is codeword + sparse error; returns the
    /// error part.
    pub fn decode_word(&self, word: &BitVector) -> Option<BitVector> {
        self.decode_syndrome(&self.syndrome(word))
    }

    /// Complete decoding of the repetition code. The syndrome determines
    /// the error up to the all-ones codeword; take the lighter coset side.
    fn majority_decode(&self, syndrome: &BitVector) -> Option<BitVector> {
        let m = self.n_bits();
        // Prefix-sum reconstruction with e[0] = 0: check i says e_i + e_{i+1}.
        let mut e = BitVector::zeros(m);
        let mut bit = false;
        for i in 1..m {
            bit ^= syndrome.get(i - 1);
            e.set(i, bit);
        }
        let w = e.weight();
        if 2 * w > m {
            for i in 0..m {
                e.flip(i);
            }
        }
        Some(e)
    }
}

/// The repetition code of length m as the edge-vertex incidence of a path:
/// check i connects bits i and i+1.
pub fn path_code(m: usize) -> Result<BipartiteCode, ClassicalError> {
    if m < 2 {
        return Err(ClassicalError::PathTooShort(m));
    }
    let entries = (0..m - 1).flat_map(|i| [(i, i), (i, i + 1)]);
    let h = BinaryMatrix::from_entries(m - 1, m, entries).expect("path incidence is valid");
    BipartiteCode::new(h, CodeKind::Path, (m - 1) / 2)
}

/// Random (dv, dc)-biregular code via a seeded socket permutation. Parallel
/// edges merge mod 2; dependent rows are removed keeping the earliest
/// independent ones, so rank(H) = |B| afterwards.
pub fn random_regular_ldpc(
    n: usize,
    dv: usize,
    dc: usize,
    seed: u64,
) -> Result<BipartiteCode, ClassicalError> {
    if n == 0 || dv == 0 || dc == 0 || (n * dv) % dc != 0 {
        return Err(ClassicalError::InfeasibleDegrees { n, dv, dc });
    }
    let n_checks = n * dv / dc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sockets: Vec<usize> = (0..n * dv).collect();
    sockets.shuffle(&mut rng);
    // Socket s on the bit side belongs to bit s / dv; after the shuffle,
    // position s on the check side belongs to check s / dc.
    let mut parity = std::collections::BTreeMap::new();
    for (check_socket, &bit_socket) in sockets.iter().enumerate() {
        let b = check_socket / dc;
        let a = bit_socket / dv;
        *parity.entry((b, a)).or_insert(0u8) ^= 1;
    }
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n_checks];
    for ((b, a), odd) in parity {
        if odd == 1 {
            rows[b].push(a as u32);
        }
    }
    // Keep the earliest independent rows.
    let mut echelon = Echelon::from_packed_rows(n, std::iter::empty());
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for row in rows {
        let v = BitVector::from_support(n, &row.iter().map(|&c| c as usize).collect::<Vec<_>>());
        if echelon.grow(v) {
            kept.push(row);
        }
    }
    let h = BinaryMatrix::from_rows(kept.len(), n, kept).expect("rows already canonical");
    let mut code = BipartiteCode::new(h, CodeKind::Ldpc, 0)?;
    code.decoder_radius = empirical_radius(&code, seed);
    Ok(code)
}

/// Largest w such that 1000 seeded weight-w trials all recover exactly
/// under the greedy bit-flip decoder.
fn empirical_radius(code: &BipartiteCode, seed: u64) -> usize {
    let n = code.n_bits();
    let mut radius = 0;
    'outer: for w in 1..=n / 4 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000 ^ w as u64);
        for _ in 0..1000 {
            let mut positions: Vec<usize> = (0..n).collect();
            positions.shuffle(&mut rng);
            let error = BitVector::from_support(n, &positions[..w]);
            let syndrome = code.syndrome(&error);
            match bitflip_decode(code, &syndrome, usize::MAX) {
                Some(e) if e == error => {}
                _ => break 'outer,
            }
        }
        radius = w;
    }
    radius
}

/// Greedy bit-flip syndrome decoding: flip the bit with the largest strict
/// reduction in unsatisfied checks (lowest index on ties) until the
/// syndrome clears or no flip helps.
pub fn bitflip_decode(
    code: &BipartiteCode,
    syndrome: &BitVector,
    max_rounds: usize,
) -> Option<BitVector> {
    assert_eq!(syndrome.len(), code.n_checks(), "syndrome length mismatch");
    let cols = code.h.transpose();
    let n = code.n_bits();
    let mut residual = syndrome.clone();
    let mut error = BitVector::zeros(n);
    let mut rounds = 0;
    while !residual.is_zero() && rounds < max_rounds {
        let mut best: Option<(isize, usize)> = None;
        for j in 0..n {
            let col = cols.row(j);
            let unsat = col.iter().filter(|&&b| residual.get(b as usize)).count() as isize;
            let gain = 2 * unsat - col.len() as isize;
            if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, j));
            }
        }
        let (_, j) = best?;
        error.flip(j);
        for &b in cols.row(j) {
            residual.flip(b as usize);
        }
        rounds += 1;
    }
    residual.is_zero().then_some(error)
}

/// Pivot columns of H: A' indexes an invertible |B| x |B| submatrix, A'' is
/// the complement (|A''| = k). Deterministic given H.
pub fn select_a_prime(code: &BipartiteCode) -> (Vec<usize>, Vec<usize>) {
    let echelon = Echelon::new(&code.h, false);
    debug_assert_eq!(echelon.rank(), code.n_checks());
    let a_prime: Vec<usize> = echelon.pivots().to_vec();
    let mut is_pivot = vec![false; code.n_bits()];
    for &p in &a_prime {
        is_pivot[p] = true;
    }
    let a_second = (0..code.n_bits()).filter(|&c| !is_pivot[c]).collect();
    (a_prime, a_second)
}
