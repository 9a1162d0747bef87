//! Independent reference computations used by the integration tests.
//!
//! Everything in here works on plain vectors of bits and floats and is
//! written in the most direct way possible, so that it shares no code path
//! with the library it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{Complex, DMatrix};

/// Rank of a 0/1 matrix over GF(2) by textbook elimination.
pub fn rank_gf2(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|b| b & 1).collect()).collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Kernel dimension by enumerating every vector; only for tiny widths.
pub fn kernel_dim_bruteforce(rows: &[Vec<u8>], cols: usize) -> usize {
    assert!(cols <= 16);
    let mut count = 0usize;
    for v in 0u32..(1 << cols) {
        let zero = rows.iter().all(|r| {
            let mut acc = 0u8;
            for (c, &e) in r.iter().enumerate() {
                acc ^= e & ((v >> c) as u8 & 1);
            }
            acc == 0
        });
        if zero {
            count += 1;
        }
    }
    count.trailing_zeros() as usize
}

/// Product of two GF(2) polynomials given as coefficient lists (index = power of h).
pub fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= x & y;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// GF(2)-rank of a polynomial matrix acting on (F2[h]/h^N)^cols.
///
/// Coordinates are (generator, power) with power < N; an entry h^k sends
/// power t to power t + k, dropping everything at N or above.
pub fn truncated_rank(m: &[Vec<Vec<u8>>], cols: usize, n: usize) -> usize {
    let rows = m.len();
    let mut big = vec![vec![0u8; cols * n]; rows * n];
    for r in 0..rows {
        for c in 0..cols {
            for (k, &bit) in m[r][c].iter().enumerate() {
                if bit == 0 {
                    continue;
                }
                for t in 0..n {
                    if t + k < n {
                        big[r * n + t + k][c * n + t] ^= 1;
                    }
                }
            }
        }
    }
    rank_gf2(&big)
}

/// dim over GF(2) of H(V ⊗ F2[h]/h^N) for the differential d + h(1 + iota).
///
/// `d` and `iota` are square 0/1 matrices acting on column vectors.
pub fn borel_truncated_dim(d: &[Vec<u8>], iota: &[Vec<u8>], n: usize) -> usize {
    let k = d.len();
    let mut m: Vec<Vec<Vec<u8>>> = vec![vec![vec![]; k]; k];
    for r in 0..k {
        for c in 0..k {
            let mut e = vec![d[r][c] & 1];
            let lin = (iota[r][c] ^ u8::from(r == c)) & 1;
            e.push(lin);
            while e.last() == Some(&0) {
                e.pop();
            }
            m[r][c] = e;
        }
    }
    let rank = truncated_rank(&m, k, n);
    k * n - 2 * rank
}

/// Prediction for the truncated dimension from a module
/// F2[[h]]^free ⊕ ⊕ F2[h]/h^a.
pub fn predicted_truncated_dim(free: usize, torsion: &[u32], n: usize) -> usize {
    free * n + 2 * torsion.iter().map(|&a| (a as usize).min(n)).sum::<usize>()
}

/// All strata of the compactified trajectory spaces, written as strings such
/// as "Q^{1,+} x P^{0,+}", found by brute force over cut positions and signs.
pub fn strata_bruteforce(parametrized: bool, i: usize, sigma: i8) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let slots = if parametrized { i + 1 } else { i };
    // A composition is described by which of the (slots - 1) gaps are cuts.
    // In the parametrized case one extra zero-length slot is allowed for the
    // marked factor, handled by inserting a marker at every position.
    if !parametrized {
        if i == 0 {
            return out;
        }
        for cuts in 0u32..(1 << (i - 1)) {
            let mut parts = vec![];
            let mut len = 1;
            for g in 0..i - 1 {
                if cuts >> g & 1 == 1 {
                    parts.push(len);
                    len = 1;
                } else {
                    len += 1;
                }
            }
            parts.push(len);
            for signs in 0u32..(1 << parts.len()) {
                let prod: i8 = (0..parts.len()).map(|j| if signs >> j & 1 == 1 { -1 } else { 1 }).product();
                if prod != sigma {
                    continue;
                }
                let names: Vec<String> =
                    parts.iter().enumerate().map(|(j, p)| format!("Q^{{{},{}}}", p, if signs >> j & 1 == 1 { '-' } else { '+' })).collect();
                out.insert(names.join(" x "));
            }
        }
        return out;
    }
    let _ = slots;
    // Parametrized: choose the marked length m in 0..=i and a composition of
    // the rest into an ordered list of unmarked parts, then a position.
    for m in 0..=i {
        let rest = i - m;
        let comps: Vec<Vec<usize>> = if rest == 0 {
            vec![vec![]]
        } else {
            (0u32..(1 << (rest - 1)))
                .map(|cuts| {
                    let mut parts = vec![];
                    let mut len = 1;
                    for g in 0..rest - 1 {
                        if cuts >> g & 1 == 1 {
                            parts.push(len);
                            len = 1;
                        } else {
                            len += 1;
                        }
                    }
                    parts.push(len);
                    parts
                })
                .collect()
        };
        for comp in comps {
            for pos in 0..=comp.len() {
                let mut lens: Vec<(usize, bool)> = comp.iter().map(|&p| (p, false)).collect();
                lens.insert(pos, (m, true));
                for signs in 0u32..(1 << lens.len()) {
                    let sign_of = |j: usize| if signs >> j & 1 == 1 { -1i8 } else { 1 };
                    if m == 0 && sign_of(pos) == -1 {
                        continue;
                    }
                    let prod: i8 = (0..lens.len()).map(sign_of).product();
                    if prod != sigma {
                        continue;
                    }
                    let names: Vec<String> = lens
                        .iter()
                        .enumerate()
                        .map(|(j, &(p, marked))| {
                            format!("{}^{{{},{}}}", if marked { 'P' } else { 'Q' }, p, if sign_of(j) == -1 { '-' } else { '+' })
                        })
                        .collect();
                    out.insert(names.join(" x "));
                }
            }
        }
    }
    out
}

/// The right-hand sides of the low-degree pants relations, transcribed by hand.
pub fn reference_relation(i: usize, plus: bool) -> Option<&'static str> {
    match (i, plus) {
        (1, true) => Some("p^{0,+} + d_eq^{1,+} . p^{0,+}"),
        (1, false) => Some("p^{0,+} . swap + d_eq^{1,-} . p^{0,+}"),
        (2, true) => Some("p^{1,+} + p^{1,-} . swap + d_eq^{1,+} . p^{1,+} + d_eq^{1,-} . p^{1,-} + d_eq^{2,+} . p^{0,+}"),
        _ => None,
    }
}

/// Total change of arg det_C of the unitary polar factor along sampled matrices.
///
/// Coordinates are (p1, q1, ..., pn, qn) and the complex structure is
/// z_k = p_k + i q_k.
pub fn polar_winding(samples: &[DMatrix<f64>]) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for m in samples {
        // U = M (M^T M)^{-1/2}
        let e = (m.transpose() * m).symmetric_eigen();
        let inv_sqrt = &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues.map(|x| 1.0 / x.sqrt())) * e.eigenvectors.transpose();
        let u = m * inv_sqrt;
        let n = m.nrows() / 2;
        let mut c = DMatrix::<Complex<f64>>::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                c[(j, k)] = Complex::new(u[(2 * j, 2 * k)], u[(2 * j + 1, 2 * k)]);
            }
        }
        let arg = c.determinant().arg();
        if let Some(p) = prev {
            let mut delta = arg - p;
            while delta > std::f64::consts::PI {
                delta -= 2.0 * std::f64::consts::PI;
            }
            while delta < -std::f64::consts::PI {
                delta += 2.0 * std::f64::consts::PI;
            }
            total += delta;
        }
        prev = Some(arg);
    }
    total
}

/// Matrix exponential by scaling and squaring of a plain Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.iter().map(|x| x.abs()).fold(0.0, f64::max) * a.nrows() as f64;
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let b = a / f64::powi(2.0, s);
    let mut term = DMatrix::<f64>::identity(a.nrows(), a.ncols());
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &b / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Morse index by counting negative eigenvalues of a symmetric matrix.
pub fn morse_index(h: &DMatrix<f64>) -> usize {
    h.clone().symmetric_eigen().eigenvalues.iter().filter(|&&x| x < 0.0).count()
}
