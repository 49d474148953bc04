//! Explicit finite quotients of the rank-2 affine building, built from
//! Cartwright–Steger generators.
//!
//! The cyclic algebra A(S) over S ≅ F_{q^e} has basis ξ_i z^j with
//! z ξ = φ(ξ) z and z^d = 1 + y, where {ξ_i = φ^i(ξ_0)} is a normal basis
//! of F_{q^d} over F_q and y maps to a root of the chosen irreducible
//! polynomial. The generators b_u = 1 - (u / φ(u)) z^{-1}, one per class
//! of F_{q^d}* mod F_q*, act simply transitively on building vertices;
//! breadth-first closure of their images modulo the centre enumerates the
//! quotient group, and the clique complex of the resulting Cayley graph is
//! the quotient complex.

pub mod field;

use crate::graph::Graph;
use crate::simplicial::{clique_complex, SimplicialComplex};
use field::{invert_matrix, is_irreducible, poly_eval, solve_linear, SmallField, ONE, ZERO};
use std::collections::HashMap;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LsvError {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error("p_y must have degree {want}, got {got}")]
    WrongPolyDegree { want: usize, got: usize },
    #[error("p_y is reducible over F_q")]
    ReduciblePoly,
    #[error("p_y(0) = 0: y would not be a unit")]
    VanishesAtZero,
    #[error("p_y(-1) = 0: 1 + y would not be a unit")]
    VanishesAtMinusOne,
    #[error("coefficient {0} out of range for F_{1}")]
    CoefficientRange(u64, u64),
    #[error("d must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("no normal element found (impossible for a valid field tower)")]
    NoNormalElement,
    #[error("generator {0} is not invertible in A(S)")]
    NonInvertibleGenerator(usize),
    #[error("group exceeds the size gate: more than {0} elements reached")]
    SizeExceeded(usize),
    #[error("elements from different algebra contexts")]
    ContextMismatch,
}

/// Element of A(S): row-major d x d table of S-coefficients, entry
/// (i, j) multiplying ξ_i z^j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    token: u32,
    coeffs: Vec<u16>,
}

impl AlgebraElement {
    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }
}

/// Canonical projective representative: the whole coefficient table scaled
/// so its first non-zero entry in row-major order is 1. Equality of
/// canonical forms is equality in A(S)*/S*.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coeffs: Vec<u16>,
}

static TOKEN_COUNTER: std::sync::atomic::AtomicU32 = std::sync::atomic::AtomicU32::new(1);

/// Multiplication context for A(S).
pub struct LsvContext {
    token: u32,
    pub q: u64,
    pub d: usize,
    pub e: usize,
    pub fq: SmallField,
    pub fqd: SmallField,
    pub fqe: SmallField,
    /// ξ_i = φ^i(ξ_0), as elements of fqd.
    pub xi: Vec<u16>,
    /// Image of y in fqe, and (1+y), (1+y)^{-1}.
    pub y_img: u16,
    pub one_plus_y: u16,
    pub inv_one_plus_y: u16,
    /// m[a][c][k] ∈ F_q with ξ_a ξ_c = Σ_k m[a][c][k] ξ_k, flattened.
    struct_consts: Vec<u16>,
    /// Coordinates of 1 ∈ F_{q^d} in the ξ basis.
    one_coords: Vec<u16>,
    /// ξ-basis coordinates of arbitrary elements: inverse of the basis
    /// matrix, row-major d x d over fq.
    basis_inv: Vec<u16>,
    /// Frobenius x -> x^q on fqd, as a table.
    frob: Vec<u16>,
}

/// Builds the multiplication context. `p_y` lists the coefficients of the
/// level polynomial over F_q, constant term first; it must be irreducible
/// of degree e with p_y(0) != 0 and p_y(-1) != 0.
pub fn build_structure(q: u64, d: usize, e: usize, p_y: &[u64]) -> Result<LsvContext, LsvError> {
    if d < 2 {
        return Err(LsvError::DegreeTooSmall(d));
    }
    let fq = SmallField::of_order(q)?;
    if p_y.len() != e + 1 {
        return Err(LsvError::WrongPolyDegree {
            want: e,
            got: p_y.len().saturating_sub(1),
        });
    }
    let mut poly: Vec<u16> = Vec::with_capacity(e + 1);
    for &c in p_y {
        if c >= fq.size as u64 {
            return Err(LsvError::CoefficientRange(c, q));
        }
        poly.push(c as u16);
    }
    if poly.last() == Some(&ZERO) {
        return Err(LsvError::WrongPolyDegree {
            want: e,
            got: e - 1,
        });
    }
    // Normalize monic. Scaling by a unit changes neither the roots nor
    // irreducibility.
    let lead_inv = fq.inv(*poly.last().unwrap());
    for c in poly.iter_mut() {
        *c = fq.mul(*c, lead_inv);
    }
    if poly[0] == ZERO {
        return Err(LsvError::VanishesAtZero);
    }
    if poly_eval(&fq, &poly, fq.neg(ONE)) == ZERO {
        return Err(LsvError::VanishesAtMinusOne);
    }
    if !is_irreducible(&fq, &poly) {
        return Err(LsvError::ReduciblePoly);
    }
    // S = F_q[y]/(p_y) with y the residue of the variable; for e = 1 the
    // root is -p_y(0) in F_q itself.
    let (fqe, y_img) = if e == 1 {
        (fq.clone(), fq.neg(poly[0]))
    } else {
        let ext = SmallField::extension(&fq, &poly)?;
        (ext, fq.size as u16)
    };
    let one_plus_y = fqe.add(ONE, y_img);
    let inv_one_plus_y = fqe.inv(one_plus_y);

    let fqd = SmallField::extension(&fq, &field::first_irreducible(&fq, d))?;
    let frob: Vec<u16> = (0..fqd.size as u16).map(|a| fqd.pow(a, q)).collect();

    // Normal element: the first ξ_0 whose Galois orbit is an F_q-basis.
    let mut found: Option<(Vec<u16>, Vec<u16>)> = None;
    'search: for cand in 1..fqd.size as u16 {
        let mut xi = Vec::with_capacity(d);
        let mut x = cand;
        for _ in 0..d {
            xi.push(x);
            x = frob[x as usize];
        }
        // Basis matrix: column i holds the power-basis digits of ξ_i.
        let mut basis = vec![ZERO; d * d];
        for (i, &v) in xi.iter().enumerate() {
            for (r, dv) in fqd.digits(v).into_iter().enumerate() {
                basis[r * d + i] = dv;
            }
        }
        if let Some(inv) = invert_matrix(&fq, d, &basis) {
            found = Some((xi, inv));
            break 'search;
        }
    }
    let (xi, basis_inv) = found.ok_or(LsvError::NoNormalElement)?;

    let coords = |ctx_inv: &[u16], value: u16| -> Vec<u16> {
        let digits = fqd.digits(value);
        (0..d)
            .map(|i| {
                let mut acc = ZERO;
                for (j, &dv) in digits.iter().enumerate() {
                    acc = fq.add(acc, fq.mul(ctx_inv[i * d + j], dv));
                }
                acc
            })
            .collect()
    };
    let one_coords = coords(&basis_inv, ONE);
    let mut struct_consts = vec![ZERO; d * d * d];
    for a in 0..d {
        for c in 0..d {
            let prod = fqd.mul(xi[a], xi[c]);
            let cs = coords(&basis_inv, prod);
            struct_consts[(a * d + c) * d..(a * d + c) * d + d].copy_from_slice(&cs);
        }
    }
    let token = TOKEN_COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    Ok(LsvContext {
        token,
        q,
        d,
        e,
        fq,
        fqd,
        fqe,
        xi,
        y_img,
        one_plus_y,
        inv_one_plus_y,
        struct_consts,
        one_coords,
        basis_inv,
        frob,
    })
}

impl LsvContext {
    fn check(&self, a: &AlgebraElement) -> Result<(), LsvError> {
        if a.token != self.token {
            return Err(LsvError::ContextMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            token: self.token,
            coeffs: vec![ZERO; self.d * self.d],
        }
    }

    /// The unit: the field 1 expanded in the ξ basis, at z^0.
    pub fn one(&self) -> AlgebraElement {
        self.z_power(0)
    }

    /// z^k for 0 <= k < d.
    pub fn z_power(&self, k: usize) -> AlgebraElement {
        debug_assert!(k < self.d);
        let mut out = self.zero();
        for i in 0..self.d {
            out.coeffs[i * self.d + k] = self.fqe.embed_base(self.one_coords[i]);
        }
        out
    }

    /// ξ-basis coordinates (over F_q) of an element of F_{q^d}.
    pub fn xi_coords(&self, value: u16) -> Vec<u16> {
        let digits = self.fqd.digits(value);
        (0..self.d)
            .map(|i| {
                let mut acc = ZERO;
                for (j, &dv) in digits.iter().enumerate() {
                    acc = self
                        .fq
                        .add(acc, self.fq.mul(self.basis_inv[i * self.d + j], dv));
                }
                acc
            })
            .collect()
    }

    pub fn scalar_mul(&self, s: u16, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            token: a.token,
            coeffs: a.coeffs.iter().map(|&c| self.fqe.mul(s, c)).collect(),
        }
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            token: a.token,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fqe.add(x, y))
                .collect(),
        }
    }

    /// Product under (ξ_a z^i)(ξ_b z^j) =
    /// ξ_a ξ_{(b+i) mod d} (1+y)^{⌊(i+j)/d⌋} z^{(i+j) mod d}, with the
    /// ξ-product expanded through the structure constants.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, LsvError> {
        self.check(a)?;
        self.check(b)?;
        let d = self.d;
        let mut out = self.zero();
        for i in 0..d {
            for j in 0..d {
                let ca = a.coeffs[i * d + j];
                if ca == ZERO {
                    continue;
                }
                for k in 0..d {
                    for l in 0..d {
                        let cb = b.coeffs[k * d + l];
                        if cb == ZERO {
                            continue;
                        }
                        let mut s = self.fqe.mul(ca, cb);
                        if j + l >= d {
                            s = self.fqe.mul(s, self.one_plus_y);
                        }
                        let kk = (k + j) % d;
                        let zz = (j + l) % d;
                        let consts = &self.struct_consts[(i * d + kk) * d..(i * d + kk) * d + d];
                        for (t, &m) in consts.iter().enumerate() {
                            if m != ZERO {
                                let term = self.fqe.mul(s, self.fqe.embed_base(m));
                                out.coeffs[t * d + zz] = self.fqe.add(out.coeffs[t * d + zz], term);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Two-sided inverse via the left-regular representation: solve the
    /// d^2-dimensional linear system a·x = 1 over S, then confirm x·a = 1.
    pub fn inverse(&self, a: &AlgebraElement) -> Result<Option<AlgebraElement>, LsvError> {
        self.check(a)?;
        let d2 = self.d * self.d;
        let mut m = vec![ZERO; d2 * d2];
        for k in 0..self.d {
            for l in 0..self.d {
                let mut basis = self.zero();
                basis.coeffs[k * self.d + l] = ONE;
                let col = self.mul(a, &basis)?;
                for r in 0..d2 {
                    m[r * d2 + (k * self.d + l)] = col.coeffs[r];
                }
            }
        }
        let Some(x) = solve_linear(&self.fqe, d2, d2, &m, &self.one().coeffs) else {
            return Ok(None);
        };
        let candidate = AlgebraElement {
            token: self.token,
            coeffs: x,
        };
        if self.mul(a, &candidate)? != self.one() || self.mul(&candidate, a)? != self.one() {
            return Ok(None);
        }
        Ok(Some(candidate))
    }

    /// Projective canonical form: scale so the first non-zero coefficient
    /// in row-major order is 1.
    pub fn canonical(&self, a: &AlgebraElement) -> ProjectivePoint {
        match a.coeffs.iter().find(|&&c| c != ZERO) {
            None => ProjectivePoint {
                coeffs: a.coeffs.clone(),
            },
            Some(&first) => {
                let s = self.fqe.inv(first);
                ProjectivePoint {
                    coeffs: a.coeffs.iter().map(|&c| self.fqe.mul(s, c)).collect(),
                }
            }
        }
    }
}

/// The Cartwright–Steger generators b_u = 1 - (u/φ(u)) z^{-1}, one per
/// class of F_{q^d}* modulo F_q*; z^{-1} = (1+y)^{-1} z^{d-1}.
pub fn sigma1(ctx: &LsvContext) -> Vec<AlgebraElement> {
    let d = ctx.d;
    let mut reps: Vec<u16> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for u in 1..ctx.fqd.size as u16 {
        // Scale so the first non-zero digit over F_q is 1.
        let digits = ctx.fqd.digits(u);
        let lead = digits.iter().copied().find(|&c| c != ZERO).unwrap();
        let scale = ctx.fqd.embed_base(ctx.fq.inv(lead));
        let canon = ctx.fqd.mul(u, scale);
        if seen.insert(canon) {
            reps.push(canon);
        }
    }
    debug_assert_eq!(
        reps.len() as u64,
        (ctx.fqd.size as u64 - 1) / (ctx.fq.size as u64 - 1)
    );
    reps.iter()
        .map(|&u| {
            let w = ctx.fqd.mul(u, ctx.fqd.inv(ctx.frob[u as usize]));
            let coords = ctx.xi_coords(w);
            let mut b = ctx.one();
            for (i, &c) in coords.iter().enumerate() {
                let s = ctx.fqe.mul(ctx.fqe.embed_base(c), ctx.inv_one_plus_y);
                let cell = &mut b.coeffs[i * d + (d - 1)];
                *cell = ctx.fqe.sub(*cell, s);
            }
            b
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct LsvBuildInfo {
    pub group_size: usize,
    pub generator_count: usize,
    pub bfs_depth: usize,
}

/// Breadth-first closure of the generator images modulo the centre,
/// starting at the identity, then the clique complex of the Cayley graph
/// with faces up to dimension d-1. Vertex ids are BFS discovery order.
pub fn build_quotient_complex(
    ctx: &LsvContext,
    max_group_size: usize,
) -> Result<(SimplicialComplex, LsvBuildInfo), LsvError> {
    let sigma = sigma1(ctx);
    let mut generators: Vec<AlgebraElement> = Vec::new();
    let mut gen_keys = std::collections::HashSet::new();
    for (i, b) in sigma.iter().enumerate() {
        let inv = ctx.inverse(b)?.ok_or(LsvError::NonInvertibleGenerator(i))?;
        for g in [b.clone(), inv] {
            let key = ctx.canonical(&g);
            if gen_keys.insert(key.coeffs.clone()) {
                generators.push(g);
            }
        }
    }

    let identity = ctx.canonical(&ctx.one());
    let mut ids: HashMap<Vec<u16>, u32> = HashMap::new();
    let mut elements: Vec<AlgebraElement> = Vec::new();
    ids.insert(identity.coeffs.clone(), 0);
    elements.push(ctx.one());
    let mut queue: VecDeque<(u32, usize)> = VecDeque::from([(0, 0)]);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut depth = 0;
    while let Some((gid, dist)) = queue.pop_front() {
        depth = depth.max(dist);
        let g = elements[gid as usize].clone();
        for s in &generators {
            let h = ctx.mul(&g, s)?;
            let key = ctx.canonical(&h);
            let hid = match ids.get(&key.coeffs) {
                Some(&id) => id,
                None => {
                    let id = elements.len() as u32;
                    if elements.len() >= max_group_size {
                        return Err(LsvError::SizeExceeded(max_group_size));
                    }
                    ids.insert(key.coeffs.clone(), id);
                    elements.push(h);
                    queue.push_back((id, dist + 1));
                    id
                }
            };
            if hid != gid {
                edges.push((gid as usize, hid as usize));
            }
        }
    }
    let n = elements.len();
    let graph = Graph::new(n, edges);
    let complex = clique_complex(&graph, ctx.d - 1);
    Ok((
        complex,
        LsvBuildInfo {
            group_size: n,
            generator_count: generators.len(),
            bfs_depth: depth,
        },
    ))
}
