//! Symbolic paths in `Sp(R^{2n})` starting at the identity, and their
//! Conley–Zehnder index.
//!
//! The index is evaluated by rules rather than by a crossing-form
//! computation:
//!
//! * `exp(Q, t)` with `t` small enough that the path never reaches
//!   eigenvalue 1 has index equal to the Morse index of `Q`;
//! * a loop offset `k` contributes `-2k`;
//! * direct sums are additive (an assumption of this path algebra);
//! * a catenation whose second arc keeps `det(I - A)` away from zero has the
//!   index of its first arc;
//! * anything else on a single plane is resolved by the planar formula, which
//!   tracks the angle `atan2(c - b, a + d)` of `[[a, b], [c, d]]` along the path.
//!
//! Paths are split along the finest partition of planes they respect before
//! any rule is applied, so `cat(rot(1, pi), exp(p1 q1 + p2^2, t))` reduces to
//! a planar computation plus an exponential arc.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Complex, DMatrix};

use super::matrix::{block_diag, eigenvalues, hamiltonian_of, morse_index, orthogonal_factor, SympMatrix, Tolerances};
use crate::error::{Error, ParseError, Result};

const CONSTANCY_SAMPLES: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub enum PathExpr {
    /// `s -> exp(s t J0^{-1} S)` for the quadratic form `x^T S x`.
    Exp {
        s: DMatrix<f64>,
        t: f64,
    },
    /// Rotation of one `(p, q)` plane by `s * angle`, identity elsewhere.
    Rot {
        n: usize,
        plane: usize,
        angle: f64,
    },
    Id {
        n: usize,
    },
    /// The first path, then the second one multiplied on the left by the
    /// endpoint of the first.
    Cat(Box<PathExpr>, Box<PathExpr>),
    Sum(Vec<PathExpr>),
    /// Acts by the `k`-th power of the generator of `π1(Sp)`, a full positive
    /// turn of the first plane.
    Loop(i64, Box<PathExpr>),
    /// The lift of the square of the endpoint: `cat(e, e)`.
    Square(Box<PathExpr>),
}

impl PathExpr {
    pub fn cat(a: PathExpr, b: PathExpr) -> PathExpr {
        PathExpr::Cat(Box::new(a), Box::new(b))
    }

    pub fn square(e: PathExpr) -> PathExpr {
        PathExpr::Square(Box::new(e))
    }

    pub fn with_loop(k: i64, e: PathExpr) -> PathExpr {
        PathExpr::Loop(k, Box::new(e))
    }

    pub fn n(&self) -> usize {
        match self {
            PathExpr::Exp { s, .. } => s.nrows() / 2,
            PathExpr::Rot { n, .. } | PathExpr::Id { n } => *n,
            PathExpr::Cat(a, _) => a.n(),
            PathExpr::Sum(parts) => parts.iter().map(PathExpr::n).sum(),
            PathExpr::Loop(_, e) | PathExpr::Square(e) => e.n(),
        }
    }

    pub fn at(&self, s: f64) -> DMatrix<f64> {
        match self {
            PathExpr::Exp { s: q, t } => (hamiltonian_of(q) * (s * t)).exp(),
            PathExpr::Rot { n, plane, angle } => {
                let mut m = DMatrix::identity(2 * n, 2 * n);
                let (sn, cs) = (s * angle).sin_cos();
                let k = 2 * plane;
                m[(k, k)] = cs;
                m[(k, k + 1)] = -sn;
                m[(k + 1, k)] = sn;
                m[(k + 1, k + 1)] = cs;
                m
            }
            PathExpr::Id { n } => DMatrix::identity(2 * n, 2 * n),
            PathExpr::Cat(a, b) => {
                if s <= 0.5 {
                    a.at(2.0 * s)
                } else {
                    a.at(1.0) * b.at(2.0 * s - 1.0)
                }
            }
            PathExpr::Sum(parts) => block_diag(&parts.iter().map(|p| p.at(s)).collect::<Vec<_>>()),
            PathExpr::Loop(k, e) => PathExpr::Rot { n: e.n(), plane: 0, angle: 2.0 * PI * *k as f64 }.at(s) * e.at(s),
            PathExpr::Square(e) => {
                if s <= 0.5 {
                    e.at(2.0 * s)
                } else {
                    e.at(1.0) * e.at(2.0 * s - 1.0)
                }
            }
        }
    }

    pub fn endpoint(&self) -> DMatrix<f64> {
        self.at(1.0)
    }

    /// Rough bound on the angular speed, used to pick sample counts.
    fn speed(&self) -> f64 {
        match self {
            PathExpr::Exp { s, t } => (hamiltonian_of(s) * *t).norm(),
            PathExpr::Rot { angle, .. } => angle.abs(),
            PathExpr::Id { .. } => 0.0,
            PathExpr::Cat(a, b) => 2.0 * a.speed().max(b.speed()),
            PathExpr::Sum(parts) => parts.iter().map(PathExpr::speed).fold(0.0, f64::max),
            PathExpr::Loop(k, e) => 2.0 * PI * k.unsigned_abs() as f64 + e.speed(),
            PathExpr::Square(e) => 2.0 * e.speed(),
        }
    }

    /// Grows the path to `n` planes by acting trivially on the new ones.
    pub fn pad(self, n: usize) -> Result<PathExpr> {
        let have = self.n();
        if have == n {
            return Ok(self);
        }
        if have > n {
            return Err(Error::Structure(format!("path on {have} planes cannot be padded to {n}")));
        }
        Ok(match self {
            PathExpr::Exp { s, t } => {
                let mut big = DMatrix::zeros(2 * n, 2 * n);
                big.view_mut((0, 0), (s.nrows(), s.nrows())).copy_from(&s);
                PathExpr::Exp { s: big, t }
            }
            PathExpr::Rot { plane, angle, .. } => PathExpr::Rot { n, plane, angle },
            PathExpr::Id { .. } => PathExpr::Id { n },
            PathExpr::Cat(a, b) => PathExpr::cat(a.pad(n)?, b.pad(n)?),
            PathExpr::Sum(mut parts) => {
                parts.push(PathExpr::Id { n: n - have });
                PathExpr::Sum(parts)
            }
            PathExpr::Loop(k, e) => PathExpr::with_loop(k, e.pad(n)?),
            PathExpr::Square(e) => PathExpr::square(e.pad(n)?),
        })
    }

    fn is_identity(&self) -> bool {
        match self {
            PathExpr::Id { .. } => true,
            PathExpr::Rot { angle, .. } => *angle == 0.0,
            PathExpr::Cat(a, b) => a.is_identity() && b.is_identity(),
            PathExpr::Sum(parts) => parts.iter().all(PathExpr::is_identity),
            PathExpr::Square(e) => e.is_identity(),
            PathExpr::Exp { s, .. } => s.iter().all(|x| *x == 0.0),
            PathExpr::Loop(..) => false,
        }
    }

    /// Moves every loop offset to the outside, returning the loop-free path
    /// and the total number of turns.
    fn pull_loops(&self) -> (PathExpr, i64) {
        match self {
            PathExpr::Loop(k, e) => {
                let (e, j) = e.pull_loops();
                (e, j + k)
            }
            PathExpr::Cat(a, b) => {
                let ((a, i), (b, j)) = (a.pull_loops(), b.pull_loops());
                (PathExpr::cat(a, b), i + j)
            }
            PathExpr::Sum(parts) => {
                let mut total = 0;
                let parts = parts
                    .iter()
                    .map(|p| {
                        let (p, k) = p.pull_loops();
                        total += k;
                        p
                    })
                    .collect();
                (PathExpr::Sum(parts), total)
            }
            PathExpr::Square(e) => {
                let (e, k) = e.pull_loops();
                (PathExpr::square(e), 2 * k)
            }
            other => (other.clone(), 0),
        }
    }

    fn couple(&self, offset: usize, link: &mut dyn FnMut(usize, usize)) {
        match self {
            PathExpr::Exp { s, .. } => {
                let n = s.nrows() / 2;
                for i in 0..n {
                    for j in i + 1..n {
                        let block = s.view((2 * i, 2 * j), (2, 2));
                        if block.iter().any(|x| x.abs() > 1e-14) {
                            link(offset + i, offset + j);
                        }
                    }
                }
            }
            PathExpr::Cat(a, b) => {
                a.couple(offset, link);
                b.couple(offset, link);
            }
            PathExpr::Sum(parts) => {
                let mut at = offset;
                for p in parts {
                    p.couple(at, link);
                    at += p.n();
                }
            }
            PathExpr::Loop(_, e) | PathExpr::Square(e) => e.couple(offset, link),
            PathExpr::Rot { .. } | PathExpr::Id { .. } => {}
        }
    }

    /// The finest partition of the planes that the path preserves.
    pub fn plane_groups(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(label: &mut [usize], mut i: usize) -> usize {
            while label[i] != i {
                i = label[i];
            }
            i
        }
        self.couple(0, &mut |i, j| {
            let (a, b) = (root(&mut label, i), root(&mut label, j));
            label[a.max(b)] = a.min(b);
        });
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
        for i in 0..n {
            let r = root(&mut label, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// The path seen on the given planes only, which must be a union of
    /// groups of [`PathExpr::plane_groups`].
    fn restrict(&self, planes: &[usize]) -> PathExpr {
        match self {
            PathExpr::Exp { s, t } => {
                let idx: Vec<usize> = planes.iter().flat_map(|&p| [2 * p, 2 * p + 1]).collect();
                PathExpr::Exp { s: DMatrix::from_fn(idx.len(), idx.len(), |r, c| s[(idx[r], idx[c])]), t: *t }
            }
            PathExpr::Rot { plane, angle, .. } => match planes.iter().position(|p| p == plane) {
                Some(at) => PathExpr::Rot { n: planes.len(), plane: at, angle: *angle },
                None => PathExpr::Id { n: planes.len() },
            },
            PathExpr::Id { .. } => PathExpr::Id { n: planes.len() },
            PathExpr::Cat(a, b) => PathExpr::cat(a.restrict(planes), b.restrict(planes)),
            PathExpr::Sum(parts) => {
                let mut at = 0;
                let mut out = Vec::new();
                for p in parts {
                    let local: Vec<usize> = planes.iter().filter(|&&x| x >= at && x < at + p.n()).map(|x| x - at).collect();
                    if !local.is_empty() {
                        out.push(p.restrict(&local));
                    }
                    at += p.n();
                }
                if out.len() == 1 {
                    out.pop().expect("one part")
                } else {
                    PathExpr::Sum(out)
                }
            }
            PathExpr::Loop(k, e) => PathExpr::with_loop(*k, e.restrict(planes)),
            PathExpr::Square(e) => PathExpr::square(e.restrict(planes)),
        }
    }
}

fn det_i_minus(m: &DMatrix<f64>) -> f64 {
    (DMatrix::identity(m.nrows(), m.nrows()) - m).determinant()
}

/// Evaluates Conley–Zehnder indices with fixed tolerances.
#[derive(Clone, Copy, Debug, Default)]
pub struct CzEvaluator {
    pub tol: Tolerances,
}

impl CzEvaluator {
    pub fn conley_zehnder(&self, p: &PathExpr) -> Result<i64> {
        let end = SympMatrix::new(p.endpoint(), self.tol)?;
        if !end.membership().sp_star {
            return Err(Error::Precondition("the endpoint has eigenvalue 1".into()));
        }
        let (core, turns) = p.pull_loops();
        let mut mu = -2 * turns;
        for group in core.plane_groups() {
            mu += self.mu_single(&core.restrict(&group))?;
        }
        let parity = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        if parity != end.det_i_minus().signum() {
            return Err(Error::IllConditioned(format!("parity check failed: mu = {mu}, det(I - A) = {:e}", end.det_i_minus())));
        }
        Ok(mu)
    }

    fn mu_single(&self, p: &PathExpr) -> Result<i64> {
        match p {
            PathExpr::Exp { s, t } => match self.exp_rule(s, *t) {
                Some(mu) => Ok(mu),
                None if p.n() == 1 => self.planar(p),
                None => Err(self.first_crossing(p)),
            },
            PathExpr::Rot { n: 1, .. } => self.planar(p),
            PathExpr::Id { .. } | PathExpr::Rot { .. } => Err(Error::Precondition("the path ends with eigenvalue 1 on some plane".into())),
            PathExpr::Cat(a, b) => self.mu_cat(p, a, b),
            PathExpr::Square(e) => self.mu_cat(p, e, e),
            PathExpr::Sum(parts) => parts.iter().map(|q| self.mu_single(q)).sum(),
            PathExpr::Loop(k, e) => Ok(self.mu_single(e)? - 2 * k),
        }
    }

    fn mu_cat(&self, whole: &PathExpr, a: &PathExpr, b: &PathExpr) -> Result<i64> {
        if b.is_identity() {
            return self.mu_single(a);
        }
        if a.is_identity() {
            return self.mu_single(b);
        }
        let a1 = a.endpoint();
        let start = det_i_minus(&a1);
        let constant = start.abs() > self.tol.eig
            && (0..=CONSTANCY_SAMPLES).all(|k| {
                let d = det_i_minus(&(&a1 * b.at(k as f64 / CONSTANCY_SAMPLES as f64)));
                d.signum() == start.signum() && d.abs() > self.tol.eig
            });
        if constant {
            if let Ok(mu) = self.mu_single(a) {
                return Ok(mu);
            }
        }
        if whole.n() == 1 {
            self.planar(whole)
        } else {
            Err(self.first_crossing(whole))
        }
    }

    /// Index of a small exponential arc, or `None` when the arc may reach
    /// eigenvalue 1 before its end.
    fn exp_rule(&self, s: &DMatrix<f64>, t: f64) -> Option<i64> {
        let b = hamiltonian_of(s) * t;
        let scale = 1.0 + b.norm();
        let ok = eigenvalues(&b).iter().all(|l| l.re.abs() > 1e-9 * scale || l.im.abs() < 2.0 * PI - 1e-6);
        if !ok || t <= 0.0 {
            return None;
        }
        morse_index(s).map(|i| i as i64)
    }

    fn planar(&self, p: &PathExpr) -> Result<i64> {
        let mut samples = 256 * (1 + p.speed().ceil() as usize);
        loop {
            let mut prev: Option<f64> = None;
            let mut alpha = 0.0;
            let mut smooth = true;
            for k in 0..=samples {
                let m = p.at(k as f64 / samples as f64);
                let raw = (m[(1, 0)] - m[(0, 1)]).atan2(m[(0, 0)] + m[(1, 1)]);
                if let Some(pr) = prev {
                    let mut step = raw - pr;
                    step -= 2.0 * PI * (step / (2.0 * PI)).round();
                    if step.abs() > PI / 4.0 {
                        smooth = false;
                        break;
                    }
                    alpha += step;
                } else {
                    alpha = raw;
                }
                prev = Some(raw);
            }
            if smooth {
                let end = p.endpoint();
                let tr = end[(0, 0)] + end[(1, 1)];
                if (tr - 2.0).abs() <= self.tol.eig {
                    return Err(Error::Precondition("the endpoint has eigenvalue 1".into()));
                }
                let turns = alpha / (2.0 * PI);
                return Ok(if tr > 2.0 { 1 - 2 * turns.round() as i64 } else { -2 * turns.floor() as i64 });
            }
            if samples > 1 << 22 {
                return Err(Error::IllConditioned("the planar angle could not be tracked".into()));
            }
            samples *= 4;
        }
    }

    fn first_crossing(&self, p: &PathExpr) -> Error {
        let samples = 256 * (1 + p.speed().ceil() as usize);
        let mut worst = (1.0, f64::INFINITY);
        for k in 1..=samples {
            let s = k as f64 / samples as f64;
            let d = det_i_minus(&p.at(s));
            if d.abs() < worst.1.abs() {
                worst = (s, d);
            }
        }
        Error::Crossing { at: worst.0, det: worst.1 }
    }
}

pub fn conley_zehnder(p: &PathExpr) -> Result<i64> {
    CzEvaluator::default().conley_zehnder(p)
}

/// Total change of `arg det_C U(s)` where `U(s)` is the unitary factor of
/// the polar decomposition, in the complex structure `p_k + i q_k`.
pub fn polar_winding(p: &PathExpr, samples: usize) -> f64 {
    let n = p.n();
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for k in 0..=samples {
        let m = p.at(k as f64 / samples as f64);
        let u = orthogonal_factor(&m);
        let uc = DMatrix::from_fn(n, n, |r, c| Complex::new(u[(2 * r, 2 * c)], u[(2 * r + 1, 2 * c)]));
        let arg = uc.determinant().arg();
        if let Some(pr) = prev {
            let mut step = arg - pr;
            step -= 2.0 * PI * (step / (2.0 * PI)).round();
            total += step;
        }
        prev = Some(arg);
    }
    total
}

/// `μ(p1) - μ(p2)` from the polar winding, for paths with the same endpoint.
pub fn winding_difference(p1: &PathExpr, p2: &PathExpr) -> Result<i64> {
    if p1.n() != p2.n() || (p1.endpoint() - p2.endpoint()).amax() > 1e-8 {
        return Err(Error::Precondition("the paths have different endpoints".into()));
    }
    let samples = 512 * (1 + p1.speed().max(p2.speed()).ceil() as usize);
    let diff = polar_winding(p1, samples) - polar_winding(p2, samples);
    Ok(-(diff / PI).round() as i64)
}

fn fmt_matrix(f: &mut fmt::Formatter<'_>, m: &DMatrix<f64>) -> fmt::Result {
    write!(f, "[")?;
    for r in 0..m.nrows() {
        if r > 0 {
            write!(f, ",")?;
        }
        write!(f, "[")?;
        for c in 0..m.ncols() {
            if c > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m[(r, c)])?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Exp { s, t } => {
                write!(f, "exp(")?;
                fmt_matrix(f, s)?;
                write!(f, ", {t})")
            }
            PathExpr::Rot { n, plane, angle } => write!(f, "rot({}, {angle}; n={n})", plane + 1),
            PathExpr::Id { n } => write!(f, "id({n})"),
            PathExpr::Cat(a, b) => write!(f, "cat({a}, {b})"),
            PathExpr::Sum(parts) => {
                write!(f, "sum(")?;
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            PathExpr::Loop(k, e) => write!(f, "loop({k}, {e})"),
            PathExpr::Square(e) => write!(f, "square({e})"),
        }
    }
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' | ';' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// A real number, optionally a rational multiple of `pi`: `1.5`, `pi`, `-pi/2`, `3*pi/4`.
pub fn parse_real(s: &str) -> Result<f64, ParseError> {
    let s = s.trim();
    let bad = || ParseError::new(format!("bad number `{s}`"));
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.trim().trim_end_matches('*').trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    Ok(sign * coef * PI / den)
}

fn parse_matrix_literal(s: &str) -> Result<DMatrix<f64>, ParseError> {
    let inner = s.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| ParseError::new("bad matrix literal"))?;
    let rows: Vec<Vec<f64>> = split_args(inner)
        .into_iter()
        .map(|row| {
            let row = row
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| ParseError::new(format!("bad matrix row `{row}`")))?;
            split_args(row).into_iter().map(parse_real).collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || !n.is_multiple_of(2) || rows.iter().any(|r| r.len() != n) {
        return Err(ParseError::new("a quadratic form matrix must be 2n x 2n"));
    }
    let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    if (&m - m.transpose()).amax() > 1e-12 {
        return Err(ParseError::new("a quadratic form matrix must be symmetric"));
    }
    Ok(m)
}

/// The symmetric matrix of a quadratic polynomial in `p1, q1, p2, ...`;
/// an index may be omitted for the first plane, so `p^2 + q^2` and `pq` work.
pub fn parse_quadratic(s: &str) -> Result<DMatrix<f64>, ParseError> {
    let mut terms: Vec<(f64, Vec<usize>)> = Vec::new();
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = 1.0;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == 'e' && i > start) {
            i += 1;
        }
        let coef = if i > start {
            let txt: String = chars[start..i].iter().collect();
            txt.parse::<f64>().map_err(|_| ParseError::new(format!("bad coefficient `{txt}`")))?
        } else {
            1.0
        };
        let mut vars = Vec::new();
        while i < chars.len() && chars[i] != '+' && chars[i] != '-' {
            match chars[i] {
                '*' => i += 1,
                'p' | 'q' => {
                    let off = usize::from(chars[i] == 'q');
                    i += 1;
                    let d0 = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let plane = if i > d0 {
                        let k: usize = chars[d0..i].iter().collect::<String>().parse().map_err(|_| ParseError::new("bad index"))?;
                        if k == 0 {
                            return Err(ParseError::new("plane indices start at 1"));
                        }
                        k - 1
                    } else {
                        0
                    };
                    let mut power = 1;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let d1 = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        power = chars[d1..i].iter().collect::<String>().parse().map_err(|_| ParseError::new("bad exponent"))?;
                    }
                    for _ in 0..power {
                        vars.push(2 * plane + off);
                    }
                }
                other => return Err(ParseError::new(format!("unexpected `{other}` in quadratic form"))),
            }
        }
        if vars.len() != 2 {
            return Err(ParseError::new(format!("term of degree {} in a quadratic form", vars.len())));
        }
        terms.push((sign * coef, vars));
    }
    if terms.is_empty() {
        return Err(ParseError::new("empty quadratic form"));
    }
    let dim = terms.iter().flat_map(|(_, v)| v.iter()).max().map_or(0, |m| m / 2 + 1) * 2;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, v) in terms {
        m[(v[0], v[1])] += c / 2.0;
        m[(v[1], v[0])] += c / 2.0;
    }
    Ok(m)
}

fn parse_node(s: &str) -> Result<PathExpr, ParseError> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| ParseError::new(format!("expected `name(...)`, got `{s}`")))?;
    let body = s[open + 1..].strip_suffix(')').ok_or_else(|| ParseError::new(format!("unbalanced parentheses in `{s}`")))?;
    let args = split_args(body);
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(ParseError::new(format!("`{}` takes {k} arguments, got {}", &s[..open], args.len())))
        }
    };
    match s[..open].trim() {
        "exp" => {
            arity(2)?;
            let q = if args[0].starts_with('[') { parse_matrix_literal(args[0])? } else { parse_quadratic(args[0])? };
            Ok(PathExpr::Exp { s: q, t: parse_real(args[1])? })
        }
        "rot" => {
            if args.len() < 2 {
                return Err(ParseError::new("`rot` takes a plane and an angle"));
            }
            let plane: usize = args[0].parse().map_err(|_| ParseError::new(format!("bad plane `{}`", args[0])))?;
            if plane == 0 {
                return Err(ParseError::new("plane indices start at 1"));
            }
            let n = match args.get(2).and_then(|a| a.strip_prefix("n=")) {
                Some(v) => v.trim().parse().map_err(|_| ParseError::new("bad n"))?,
                None => plane,
            };
            Ok(PathExpr::Rot { n: n.max(plane), plane: plane - 1, angle: parse_real(args[1])? })
        }
        "id" => {
            arity(1)?;
            Ok(PathExpr::Id { n: args[0].parse().map_err(|_| ParseError::new("bad n"))? })
        }
        "cat" => {
            if args.len() < 2 {
                return Err(ParseError::new("`cat` takes at least two paths"));
            }
            let mut parts = args.iter().map(|a| parse_node(a)).collect::<Result<Vec<_>, _>>()?;
            let n = parts.iter().map(PathExpr::n).max().unwrap_or(0);
            parts = parts.into_iter().map(|p| p.pad(n)).collect::<Result<_>>().map_err(|e| ParseError::new(e.to_string()))?;
            let mut it = parts.into_iter();
            let first = it.next().expect("two parts");
            Ok(it.fold(first, PathExpr::cat))
        }
        "sum" => Ok(PathExpr::Sum(args.iter().map(|a| parse_node(a)).collect::<Result<_, _>>()?)),
        "loop" => {
            arity(2)?;
            let k: i64 = args[0].parse().map_err(|_| ParseError::new(format!("bad loop count `{}`", args[0])))?;
            Ok(PathExpr::with_loop(k, parse_node(args[1])?))
        }
        "square" => {
            arity(1)?;
            Ok(PathExpr::square(parse_node(args[0])?))
        }
        other => Err(ParseError::new(format!("unknown path constructor `{other}`"))),
    }
}

/// Parses a path such as `cat(rot(1, pi), exp(p1 q1 + p2^2, 0.01))`, padded
/// to `n` planes when given.
pub fn parse_path(s: &str, n: Option<usize>) -> Result<PathExpr, ParseError> {
    let p = parse_node(s)?;
    match n {
        Some(n) => p.pad(n).map_err(|e| ParseError::new(e.to_string())),
        None => Ok(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(s: &str) -> i64 {
        conley_zehnder(&parse_path(s, None).unwrap()).unwrap()
    }

    #[test]
    fn small_exponential_arcs() {
        assert_eq!(mu("exp(p^2+q^2, 0.01)"), 0);
        assert_eq!(mu("exp(-p^2-q^2, 0.01)"), 2);
        assert_eq!(mu("exp(pq, 0.01)"), 1);
        assert_eq!(mu("exp(p1^2 + q1^2 - p2 q2, 0.01)"), 1);
    }

    #[test]
    fn rotated_arc() {
        assert_eq!(mu("cat(rot(1, pi), exp(pq, 0.01))"), 0);
        assert_eq!(mu("cat(rot(1, pi), exp(p1 q1 - p2^2 - q2^2, 0.01))"), 2);
    }

    #[test]
    fn rotations_and_loops() {
        assert_eq!(mu("rot(1, pi/2)"), 0);
        assert_eq!(mu("rot(1, 5*pi/2)"), -2);
        assert_eq!(mu("rot(1, -pi/2)"), 2);
        assert_eq!(mu("loop(1, rot(1, pi/2))"), -2);
        assert_eq!(mu("exp(p^2 + q^2, 7)"), -2);
    }

    #[test]
    fn winding_matches_rules() {
        let a = parse_path("rot(1, 5*pi/2)", None).unwrap();
        let b = parse_path("rot(1, pi/2)", None).unwrap();
        assert_eq!(winding_difference(&a, &b).unwrap(), conley_zehnder(&a).unwrap() - conley_zehnder(&b).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_path("exp(p^3, 1)", None).is_err());
        assert!(parse_path("rot(0, 1)", None).is_err());
        assert!(parse_path("foo(1)", None).is_err());
        assert!(parse_real("3*pi/4").unwrap() - 3.0 * PI / 4.0 < 1e-15);
    }
}
