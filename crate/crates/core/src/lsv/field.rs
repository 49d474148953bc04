//! Table-backed small finite fields and just enough polynomial arithmetic
//! to build them. Elements are indices 0..size; for an extension field the
//! index digits in base `base_size` are the coordinates over the base field
//! in the power basis, so coordinate extraction is free. Every field this
//! crate needs has at most a few thousand elements, which keeps full
//! multiplication tables cheap and arithmetic branch-free.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} exceeds the table limit {1}")]
    TooLarge(u64, usize),
    #[error("modulus {0:?} is not irreducible")]
    Reducible(Vec<u16>),
    #[error("modulus must be monic of degree >= 1, got {0:?}")]
    BadModulus(Vec<u16>),
}

const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone)]
pub struct SmallField {
    pub size: usize,
    pub characteristic: u64,
    /// For extensions, the base field size; equals `characteristic` for
    /// prime fields and fields built directly over them.
    pub base_size: usize,
    pub degree_over_base: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    neg: Vec<u16>,
}

pub const ZERO: u16 = 0;
pub const ONE: u16 = 1;

impl SmallField {
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; 0 maps to 0 (never consult it for zero).
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn pow(&self, mut a: u16, mut n: u64) -> u16 {
        let mut acc = ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        acc
    }

    /// Digits of an element over the base field, little-endian power basis.
    pub fn digits(&self, a: u16) -> Vec<u16> {
        let mut a = a as usize;
        let mut out = Vec::with_capacity(self.degree_over_base);
        for _ in 0..self.degree_over_base {
            out.push((a % self.base_size) as u16);
            a /= self.base_size;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u16]) -> u16 {
        let mut a = 0usize;
        for &d in digits.iter().rev() {
            debug_assert!((d as usize) < self.base_size);
            a = a * self.base_size + d as usize;
        }
        a as u16
    }

    /// Constant embedding of a base-field element.
    pub fn embed_base(&self, a: u16) -> u16 {
        debug_assert!((a as usize) < self.base_size);
        a
    }

    pub fn prime(p: u64) -> Result<SmallField, FieldError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(FieldError::NotPrimePower(p));
        }
        if p as usize > TABLE_LIMIT {
            return Err(FieldError::TooLarge(p, TABLE_LIMIT));
        }
        let size = p as usize;
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = ((a + b) % size) as u16;
                mul[a * size + b] = ((a * b) % size) as u16;
            }
        }
        let neg = (0..size).map(|a| ((size - a) % size) as u16).collect();
        let mut field = SmallField {
            size,
            characteristic: p,
            base_size: size,
            degree_over_base: 1,
            add,
            mul,
            inv: Vec::new(),
            neg,
        };
        field.inv = build_inverse_table(&field);
        Ok(field)
    }

    /// Quotient `base[x] / (modulus)`. The modulus must be monic and
    /// irreducible over the base; its degree becomes `degree_over_base`.
    pub fn extension(base: &SmallField, modulus: &[u16]) -> Result<SmallField, FieldError> {
        let n = modulus.len().saturating_sub(1);
        if n < 1 || modulus.last() != Some(&ONE) {
            return Err(FieldError::BadModulus(modulus.to_vec()));
        }
        if !is_irreducible(base, modulus) {
            return Err(FieldError::Reducible(modulus.to_vec()));
        }
        let size = base
            .size
            .checked_pow(n as u32)
            .filter(|&s| s <= TABLE_LIMIT);
        let Some(size) = size else {
            return Err(FieldError::TooLarge(
                (base.size as u64).pow(n as u32),
                TABLE_LIMIT,
            ));
        };
        let decode = |a: usize| -> Vec<u16> {
            let mut a = a;
            (0..n)
                .map(|_| {
                    let d = (a % base.size) as u16;
                    a /= base.size;
                    d
                })
                .collect()
        };
        let encode = |digits: &[u16]| -> u16 {
            let mut v = 0usize;
            for &d in digits.iter().rev() {
                v = v * base.size + d as usize;
            }
            v as u16
        };
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        let mut neg = vec![0u16; size];
        for a in 0..size {
            let da = decode(a);
            neg[a] = encode(&da.iter().map(|&x| base.neg(x)).collect::<Vec<_>>());
            for b in 0..size {
                let db = decode(b);
                let sum: Vec<u16> = da.iter().zip(&db).map(|(&x, &y)| base.add(x, y)).collect();
                add[a * size + b] = encode(&sum);
                let prod = poly_mul_mod(base, &da, &db, modulus);
                mul[a * size + b] = encode(&prod);
            }
        }
        let mut field = SmallField {
            size,
            characteristic: base.characteristic,
            base_size: base.size,
            degree_over_base: n,
            add,
            mul,
            inv: Vec::new(),
            neg,
        };
        field.inv = build_inverse_table(&field);
        Ok(field)
    }

    /// GF(order) with a deterministically chosen modulus when the order is
    /// a proper prime power.
    pub fn of_order(order: u64) -> Result<SmallField, FieldError> {
        let p = (2..=order)
            .find(|d| order % d == 0)
            .ok_or(FieldError::NotPrimePower(order))?;
        let mut m = 0u32;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(order));
        }
        let prime = SmallField::prime(p)?;
        if m == 1 {
            return Ok(prime);
        }
        let modulus = first_irreducible(&prime, m as usize);
        SmallField::extension(&prime, &modulus)
    }
}

fn build_inverse_table(field: &SmallField) -> Vec<u16> {
    let mut inv = vec![0u16; field.size];
    for a in 1..field.size {
        for b in 1..field.size {
            if field.mul(a as u16, b as u16) == ONE {
                inv[a] = b as u16;
                break;
            }
        }
    }
    inv
}

// --- dense little-endian polynomials over a SmallField ---

fn poly_trim(p: &mut Vec<u16>) {
    while p.last() == Some(&ZERO) {
        p.pop();
    }
}

pub fn poly_mul(field: &SmallField, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo a monic m.
pub fn poly_rem(field: &SmallField, a: &[u16], m: &[u16]) -> Vec<u16> {
    debug_assert_eq!(m.last(), Some(&ONE), "divisor must be monic");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let deg_m = m.len() - 1;
    while r.len() > deg_m {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - deg_m;
        if lead != ZERO {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = field.sub(r[shift + i], field.mul(lead, c));
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(field: &SmallField, a: &[u16], b: &[u16], m: &[u16]) -> Vec<u16> {
    let mut r = poly_rem(field, &poly_mul(field, a, b), m);
    r.resize(m.len() - 1, ZERO);
    r
}

pub fn poly_eval(field: &SmallField, p: &[u16], x: u16) -> u16 {
    p.iter()
        .rev()
        .fold(ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most deg/2. The fields here are tiny, so this is instant and
/// leaves nothing to trust.
pub fn is_irreducible(field: &SmallField, p: &[u16]) -> bool {
    let deg = p.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for k in 1..=deg / 2 {
        let count = field.size.pow(k as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(k + 1);
            let mut v = idx;
            for _ in 0..k {
                divisor.push((v % field.size) as u16);
                v /= field.size;
            }
            divisor.push(ONE);
            if poly_rem(field, p, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically first monic irreducible of the given degree.
pub fn first_irreducible(field: &SmallField, degree: usize) -> Vec<u16> {
    let count = field.size.pow(degree as u32);
    for idx in 0..count {
        let mut p = Vec::with_capacity(degree + 1);
        let mut v = idx;
        for _ in 0..degree {
            p.push((v % field.size) as u16);
            v /= field.size;
        }
        p.push(ONE);
        if is_irreducible(field, &p) {
            return p;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Gaussian elimination over a SmallField: the inverse of a square matrix
/// given in row-major order, or None when singular.
pub fn invert_matrix(field: &SmallField, n: usize, m: &[u16]) -> Option<Vec<u16>> {
    let mut a = m.to_vec();
    let mut inv: Vec<u16> = vec![ZERO; n * n];
    for i in 0..n {
        inv[i * n + i] = ONE;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r * n + col] != ZERO)?;
        for j in 0..n {
            a.swap(col * n + j, pivot * n + j);
            inv.swap(col * n + j, pivot * n + j);
        }
        let scale = field.inv(a[col * n + col]);
        for j in 0..n {
            a[col * n + j] = field.mul(a[col * n + j], scale);
            inv[col * n + j] = field.mul(inv[col * n + j], scale);
        }
        for r in 0..n {
            if r != col && a[r * n + col] != ZERO {
                let factor = a[r * n + col];
                for j in 0..n {
                    let s = field.mul(factor, a[col * n + j]);
                    a[r * n + j] = field.sub(a[r * n + j], s);
                    let s = field.mul(factor, inv[col * n + j]);
                    inv[r * n + j] = field.sub(inv[r * n + j], s);
                }
            }
        }
    }
    Some(inv)
}

/// Any solution of the square-or-rectangular system M x = rhs over the
/// field (M row-major, rows x cols), or None when inconsistent.
pub fn solve_linear(
    field: &SmallField,
    rows: usize,
    cols: usize,
    m: &[u16],
    rhs: &[u16],
) -> Option<Vec<u16>> {
    let mut a = m.to_vec();
    let mut b = rhs.to_vec();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| a[r * cols + col] != ZERO) else {
            continue;
        };
        for j in 0..cols {
            a.swap(row * cols + j, p * cols + j);
        }
        b.swap(row, p);
        let scale = field.inv(a[row * cols + col]);
        for j in 0..cols {
            a[row * cols + j] = field.mul(a[row * cols + j], scale);
        }
        b[row] = field.mul(b[row], scale);
        for r in 0..rows {
            if r != row && a[r * cols + col] != ZERO {
                let factor = a[r * cols + col];
                for j in 0..cols {
                    let s = field.mul(factor, a[row * cols + j]);
                    a[r * cols + j] = field.sub(a[r * cols + j], s);
                }
                let s = field.mul(factor, b[row]);
                b[r] = field.sub(b[r], s);
            }
        }
        pivot_of_col[col] = row;
        row += 1;
        if row == rows {
            break;
        }
    }
    // Consistency: zero rows must have zero rhs.
    for r in row..rows {
        if b[r] != ZERO {
            return None;
        }
    }
    let mut x = vec![ZERO; cols];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            x[col] = b[pr];
        }
    }
    Some(x)
}
