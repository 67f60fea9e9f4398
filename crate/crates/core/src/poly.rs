//! Univariate polynomials over F_p, just enough to find the roots of a
//! squarefree polynomial that splits into linear factors.

use crate::field::PrimeField;

/// Coefficients from the constant term upwards, without trailing zeros.
pub type Poly = Vec<u64>;

/// Below this modulus roots are found by evaluating at every field element.
const BRUTE_FORCE_LIMIT: u64 = 1 << 12;

pub fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(f: PrimeField, p: &Poly, x: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
}

pub fn mul(f: PrimeField, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.mul_add(out[i + j], x, y);
        }
    }
    trim(&mut out);
    out
}

pub fn sub(f: PrimeField, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n).map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: PrimeField, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]);
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem[dr], lead_inv);
        quot[dr - db] = c;
        for (i, &bc) in b.iter().enumerate() {
            rem[dr - db + i] = f.sub(rem[dr - db + i], f.mul(c, bc));
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn monic(f: PrimeField, a: &Poly) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = f.inv(l);
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

pub fn gcd(f: PrimeField, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `base^exp mod modulus`
pub fn powmod(f: PrimeField, base: &Poly, mut exp: u64, modulus: &Poly) -> Poly {
    let mut acc: Poly = vec![1];
    let (_, mut b) = divrem(f, base, modulus);
    let (_, a0) = divrem(f, &acc, modulus);
    acc = a0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = divrem(f, &mul(f, &acc, &b), modulus).1;
        }
        b = divrem(f, &mul(f, &b, &b), modulus).1;
        exp >>= 1;
    }
    acc
}

/// Roots of a squarefree polynomial that splits into distinct linear factors over F_p,
/// in increasing order. Returns `None` if the roots found do not account for the degree.
///
/// Small fields are searched exhaustively. Larger fields use equal-degree splitting
/// with `gcd(g, (X + a)^((p-1)/2) - 1)`, sweeping `a = 0, 1, 2, ...` deterministically.
pub fn split_roots(f: PrimeField, poly: &Poly) -> Option<Vec<u64>> {
    let g = monic(f, poly);
    let d = degree(&g)?;
    let mut roots = Vec::with_capacity(d);
    if f.modulus() <= BRUTE_FORCE_LIMIT {
        roots.extend((0..f.modulus()).filter(|&x| eval(f, &g, x) == 0));
    } else {
        split_into(f, g, &mut roots);
    }
    roots.sort_unstable();
    roots.dedup();
    (roots.len() == d).then_some(roots)
}

fn split_into(f: PrimeField, g: Poly, roots: &mut Vec<u64>) {
    match degree(&g) {
        None | Some(0) => return,
        Some(1) => {
            roots.push(f.neg(g[0]));
            return;
        }
        _ => {}
    }
    if g[0] == 0 {
        roots.push(0);
        split_into(f, divrem(f, &g, &vec![0, 1]).0, roots);
        return;
    }
    let half = (f.modulus() - 1) / 2;
    for a in 0..f.modulus() {
        let h = powmod(f, &vec![a, 1], half, &g);
        let h = sub(f, &h, &vec![1]);
        let c = gcd(f, &g, &h);
        let dc = degree(&c).unwrap_or(0);
        if dc > 0 && dc < degree(&g).unwrap() {
            let (q, _) = divrem(f, &g, &c);
            split_into(f, c, roots);
            split_into(f, monic(f, &q), roots);
            return;
        }
    }
}
