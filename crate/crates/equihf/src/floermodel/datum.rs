use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;

use crate::complexes::{Complex, Generator, Grading};
use crate::error::{Error, ParseError, Result};
use crate::morseflow::Sign;
use crate::scalars::{Gf2, HPoly, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Exact,
    Monotone,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Monotone => "monotone",
        }
    }
}

/// A fixed point of `φ`, which is also a `ρ`-fixed generator of `CF(φ²)`
/// under the same name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub name: String,
    pub degree: i64,
    #[serde(serialize_with = "ser_rational")]
    pub action: Rational64,
    pub krein: Option<i64>,
    pub detsign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicPoint {
    pub name: String,
    pub degree: i64,
    #[serde(serialize_with = "ser_rational")]
    pub action: Rational64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// The outputs of the moduli counts for `φ` and `φ²`, stored as matrices.
///
/// `pants[(i, σ)]` has one row per generator of `CF(φ²)` and one column per
/// pair `(a, b)` of generators of `CF(φ)`, at index `a * m + b`. Missing
/// keys are zero matrices; stored matrices are never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FloerDatum {
    pub mode: Mode,
    pub n: usize,
    pub epsilon: Rational64,
    pub phi: Vec<FixedPoint>,
    pub phi2: Vec<PeriodicPoint>,
    pub rho: Vec<usize>,
    pub d_phi: Mat<Gf2>,
    pub d_phi2: Mat<Gf2>,
    pub d_eq: BTreeMap<(usize, Sign), Mat<Gf2>>,
    pub pants: BTreeMap<(usize, Sign), Mat<Gf2>>,
}

pub const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

impl FloerDatum {
    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn k(&self) -> usize {
        self.phi2.len()
    }

    /// Position in `CF(φ²)` of each fixed point of `φ`.
    pub fn embedding(&self) -> Vec<usize> {
        self.phi.iter().map(|p| self.phi2.iter().position(|q| q.name == p.name).expect("checked by check_structure")).collect()
    }

    pub fn d_level(&self, i: usize, s: Sign) -> Mat<Gf2> {
        self.d_eq.get(&(i, s)).cloned().unwrap_or_else(|| Mat::zeros(self.k(), self.k()))
    }

    pub fn pants_level(&self, i: usize, s: Sign) -> Mat<Gf2> {
        self.pants.get(&(i, s)).cloned().unwrap_or_else(|| Mat::zeros(self.k(), self.m() * self.m()))
    }

    pub fn d_eq_max(&self) -> usize {
        self.d_eq.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn pants_max(&self) -> usize {
        self.pants.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn set_d_level(&mut self, i: usize, s: Sign, m: Mat<Gf2>) {
        if m.is_zero() {
            self.d_eq.remove(&(i, s));
        } else {
            self.d_eq.insert((i, s), m);
        }
    }

    pub fn set_pants_level(&mut self, i: usize, s: Sign, m: Mat<Gf2>) {
        if m.is_zero() {
            self.pants.remove(&(i, s));
        } else {
            self.pants.insert((i, s), m);
        }
    }

    pub fn rho_matrix(&self) -> Mat<Gf2> {
        let k = self.k();
        Mat::from_fn(k, k, |r, c| Gf2(self.rho[c] == r))
    }

    /// Index of `a ⊗ b` in `CF(φ) ⊗ CF(φ)`.
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.m() + b
    }

    /// The factor swap on `CF(φ) ⊗ CF(φ)`.
    pub fn swap_matrix(&self) -> Mat<Gf2> {
        let m = self.m();
        Mat::from_fn(m * m, m * m, |r, c| Gf2(r == (c % m) * m + c / m))
    }

    /// `d ⊗ 1 + 1 ⊗ d` on `CF(φ) ⊗ CF(φ)`.
    pub fn tensor_differential(&self) -> Mat<Gf2> {
        let m = self.m();
        let mut out = Mat::zeros(m * m, m * m);
        for a in 0..m {
            for b in 0..m {
                let col = a * m + b;
                for (t, _, _) in self.d_phi.nonzero_entries().filter(|&(_, s, _)| s == a) {
                    out.add_to(t * m + b, col, &Gf2::ONE);
                }
                for (t, _, _) in self.d_phi.nonzero_entries().filter(|&(_, s, _)| s == b) {
                    out.add_to(a * m + t, col, &Gf2::ONE);
                }
            }
        }
        out
    }

    /// `d_φ² + Σ h^i (d_eq^{i,+} + d_eq^{i,-})`.
    pub fn d_eq_poly(&self) -> Mat<HPoly> {
        let k = self.k();
        let mut out: Mat<HPoly> = self.d_phi2.map(|b| HPoly::from_bit(b.0));
        for (&(i, _), m) in &self.d_eq {
            for (r, c, _) in m.nonzero_entries() {
                out.add_to(r, c, &HPoly::monomial(i));
            }
        }
        debug_assert_eq!(out.shape(), (k, k));
        out
    }

    /// `Σ h^i (p^{i,+} + p^{i,-})`.
    pub fn pants_poly(&self) -> Mat<HPoly> {
        let mut out = Mat::zeros(self.k(), self.m() * self.m());
        for (&(i, _), m) in &self.pants {
            for (r, c, _) in m.nonzero_entries() {
                out.add_to(r, c, &HPoly::monomial(i));
            }
        }
        out
    }

    /// Normalized actions of `CF(φ²)` in monotone mode; plain actions otherwise.
    pub fn phi2_actions(&self) -> Vec<Rational64> {
        self.phi2.iter().map(|p| p.action).collect()
    }

    pub fn phi_complex(&self) -> Complex<Gf2> {
        let gens = self.phi.iter().map(|p| Generator::new(p.name.clone(), p.degree).with_action(p.action)).collect();
        Complex { gens, grading: Grading::Z2, d: self.d_phi.clone() }
    }

    pub fn phi2_complex(&self) -> Complex<Gf2> {
        let gens = self.phi2.iter().map(|p| Generator::new(p.name.clone(), p.degree).with_action(p.action)).collect();
        Complex { gens, grading: Grading::Z2, d: self.d_phi2.clone() }
    }

    pub fn has_krein_data(&self) -> bool {
        !self.phi.is_empty() && self.phi.iter().all(|p| p.krein.is_some())
    }

    /// Shapes, names, `ρ` an involution whose fixed set is exactly `CF(φ)`.
    pub fn check_structure(&self) -> Result<()> {
        let (m, k) = (self.m(), self.k());
        let mut names = BTreeSet::new();
        for p in &self.phi2 {
            if !names.insert(p.name.as_str()) {
                return Err(Error::Structure(format!("duplicate generator '{}' in phi2", p.name)));
            }
        }
        let mut seen = BTreeSet::new();
        for p in &self.phi {
            if !seen.insert(p.name.as_str()) {
                return Err(Error::Structure(format!("duplicate generator '{}' in phi", p.name)));
            }
            if !names.contains(p.name.as_str()) {
                return Err(Error::Structure(format!("fixed point '{}' does not appear in phi2", p.name)));
            }
            if let Some(s) = p.detsign {
                if s != 1 && s != -1 {
                    return Err(Error::Structure(format!("detsign of '{}' must be +1 or -1", p.name)));
                }
            }
        }
        if self.rho.len() != k || self.rho.iter().any(|&r| r >= k) {
            return Err(Error::Structure("rho must permute the generators of phi2".into()));
        }
        for (a, &b) in self.rho.iter().enumerate() {
            if self.rho[b] != a {
                return Err(Error::Structure(format!("rho is not an involution at '{}'", self.phi2[a].name)));
            }
            let fixed = a == b;
            if fixed != seen.contains(self.phi2[a].name.as_str()) {
                return Err(Error::Structure(format!(
                    "'{}' is {} by rho but {} a fixed point of phi",
                    self.phi2[a].name,
                    if fixed { "fixed" } else { "moved" },
                    if fixed { "is not" } else { "is" }
                )));
            }
        }
        let shape = |what: &str, mat: &Mat<Gf2>, want: (usize, usize)| {
            if mat.shape() == want {
                Ok(())
            } else {
                Err(Error::Structure(format!("{what} is {}x{}, expected {}x{}", mat.rows(), mat.cols(), want.0, want.1)))
            }
        };
        shape("d_phi", &self.d_phi, (m, m))?;
        shape("d_phi2", &self.d_phi2, (k, k))?;
        for (&(i, s), mat) in &self.d_eq {
            if i == 0 {
                return Err(Error::Structure("d_eq terms start at i = 1".into()));
            }
            shape(&format!("d_eq {i} {s}"), mat, (k, k))?;
        }
        for (&(i, s), mat) in &self.pants {
            shape(&format!("pants {i} {s}"), mat, (k, m * m))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode {}", self.mode.name());
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "epsilon {}", self.epsilon);
        out.push_str("\n[phi]\n");
        for p in &self.phi {
            let _ = write!(out, "{} {} {}", p.name, p.degree, p.action);
            if let Some(k) = p.krein {
                let _ = write!(out, " kappa={k}");
            }
            if let Some(s) = p.detsign {
                let _ = write!(out, " detsign={}", if s > 0 { "+1" } else { "-1" });
            }
            out.push('\n');
        }
        out.push_str("\n[phi2]\n");
        for p in &self.phi2 {
            let _ = writeln!(out, "{} {} {}", p.name, p.degree, p.action);
        }
        out.push_str("\n[rho]\n");
        for (a, &b) in self.rho.iter().enumerate() {
            if a < b {
                let _ = writeln!(out, "{} {}", self.phi2[a].name, self.phi2[b].name);
            }
        }
        write_matrix(&mut out, "[d_phi]", &self.d_phi, 0);
        write_matrix(&mut out, "[d_phi2]", &self.d_phi2, 0);
        for (&(i, s), mat) in &self.d_eq {
            write_matrix(&mut out, &format!("[d_eq {i} {s}]"), mat, 0);
        }
        for (&(i, s), mat) in &self.pants {
            write_matrix(&mut out, &format!("[pants {i} {s}]"), mat, self.m());
        }
        out
    }
}

fn write_matrix(out: &mut String, header: &str, mat: &Mat<Gf2>, group: usize) {
    out.push('\n');
    out.push_str(header);
    out.push('\n');
    for r in 0..mat.rows() {
        if mat.cols() == 0 {
            out.push('-');
        }
        for c in 0..mat.cols() {
            if group > 0 && c > 0 && c % group == 0 {
                out.push(' ');
            }
            out.push(if mat.get(r, c).0 { '1' } else { '0' });
        }
        out.push('\n');
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Section {
    Header,
    Phi,
    Phi2,
    Rho,
    DPhi,
    DPhi2,
    DEq(usize, Sign),
    Pants(usize, Sign),
}

fn parse_section(s: &str, line: usize) -> std::result::Result<Section, ParseError> {
    let inner = s.trim_start_matches('[').trim_end_matches(']');
    let words: Vec<&str> = inner.split_whitespace().collect();
    let level = |w: &[&str]| -> std::result::Result<(usize, Sign), ParseError> {
        if w.len() != 3 {
            return Err(ParseError::at(line, format!("section '{s}' needs a level and a sign")));
        }
        let i = w[1].parse::<usize>().map_err(|_| ParseError::at(line, format!("bad level '{}'", w[1])))?;
        let sign = w[2].parse::<Sign>().map_err(|_| ParseError::at(line, format!("bad sign '{}'", w[2])))?;
        Ok((i, sign))
    };
    match words.first().copied() {
        Some("phi") if words.len() == 1 => Ok(Section::Phi),
        Some("phi2") if words.len() == 1 => Ok(Section::Phi2),
        Some("rho") if words.len() == 1 => Ok(Section::Rho),
        Some("d_phi") if words.len() == 1 => Ok(Section::DPhi),
        Some("d_phi2") if words.len() == 1 => Ok(Section::DPhi2),
        Some("d_eq") => level(&words).map(|(i, s)| Section::DEq(i, s)),
        Some("pants") => level(&words).map(|(i, s)| Section::Pants(i, s)),
        _ => Err(ParseError::at(line, format!("unknown section '{s}'"))),
    }
}

fn parse_rational(s: &str, line: usize) -> std::result::Result<Rational64, ParseError> {
    s.parse::<Rational64>().map_err(|_| ParseError::at(line, format!("bad rational '{s}'")))
}

fn parse_bits(s: &str, line: usize) -> std::result::Result<Vec<Gf2>, ParseError> {
    if s == "-" {
        return Ok(vec![]);
    }
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(Gf2::ZERO),
            '1' => Ok(Gf2::ONE),
            _ => Err(ParseError::at(line, format!("expected a row of bits, found '{s}'"))),
        })
        .collect()
}

/// Parse the datum file format. See [`FloerDatum::to_text`] for the layout.
pub fn parse_datum(text: &str) -> Result<FloerDatum> {
    let mut section = Section::Header;
    let mut header: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut phi: Vec<(FixedPoint, usize)> = Vec::new();
    let mut phi2: Vec<PeriodicPoint> = Vec::new();
    let mut rho_pairs: Vec<(String, String, usize)> = Vec::new();
    let mut matrices: Vec<(Section, Vec<Vec<Gf2>>, usize)> = Vec::new();
    let mut seen_sections = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            if !content.ends_with(']') {
                return Err(ParseError::at(line, format!("unterminated section header '{content}'")).into());
            }
            section = parse_section(content, line)?;
            if !seen_sections.insert(format!("{section:?}")) {
                return Err(ParseError::at(line, format!("section '{content}' appears twice")).into());
            }
            if matches!(section, Section::DPhi | Section::DPhi2 | Section::DEq(..) | Section::Pants(..)) {
                matrices.push((section.clone(), Vec::new(), line));
            }
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match &section {
            Section::Header => {
                if words.len() != 2 {
                    return Err(ParseError::at(line, format!("expected 'key value', found '{content}'")).into());
                }
                if header.insert(words[0].to_string(), (words[1].to_string(), line)).is_some() {
                    return Err(ParseError::at(line, format!("header key '{}' repeated", words[0])).into());
                }
            }
            Section::Phi => {
                if words.len() < 3 {
                    return Err(ParseError::at(line, "a fixed point needs a name, a degree and an action").into());
                }
                let degree = words[1].parse::<i64>().map_err(|_| ParseError::at(line, format!("bad degree '{}'", words[1])))?;
                let mut p =
                    FixedPoint { name: words[0].to_string(), degree, action: parse_rational(words[2], line)?, krein: None, detsign: None };
                for extra in &words[3..] {
                    match extra.split_once('=') {
                        Some(("kappa", v)) => {
                            p.krein = Some(v.parse().map_err(|_| ParseError::at(line, format!("bad kappa '{v}'")))?);
                        }
                        Some(("detsign", v)) => {
                            p.detsign = Some(match v {
                                "+1" | "1" | "+" => 1,
                                "-1" | "-" => -1,
                                _ => return Err(ParseError::at(line, format!("bad detsign '{v}'")).into()),
                            });
                        }
                        _ => return Err(ParseError::at(line, format!("unknown attribute '{extra}'")).into()),
                    }
                }
                phi.push((p, line));
            }
            Section::Phi2 => {
                if words.len() != 3 {
                    return Err(ParseError::at(line, "a periodic point needs a name, a degree and an action").into());
                }
                let degree = words[1].parse::<i64>().map_err(|_| ParseError::at(line, format!("bad degree '{}'", words[1])))?;
                phi2.push(PeriodicPoint { name: words[0].to_string(), degree, action: parse_rational(words[2], line)? });
            }
            Section::Rho => {
                if words.len() != 2 {
                    return Err(ParseError::at(line, "rho lines name two exchanged generators").into());
                }
                rho_pairs.push((words[0].to_string(), words[1].to_string(), line));
            }
            _ => {
                let row = parse_bits(content, line)?;
                matrices.last_mut().expect("matrix sections push an entry").1.push(row);
            }
        }
    }
    let get = |key: &str| -> std::result::Result<&(String, usize), ParseError> {
        header.get(key).ok_or_else(|| ParseError::new(format!("missing header key '{key}'")))
    };
    if let Some(key) = header.keys().find(|k| !matches!(k.as_str(), "mode" | "n" | "epsilon")) {
        return Err(ParseError::at(header[key].1, format!("unknown header key '{key}'")).into());
    }
    let (mode_s, mode_line) = get("mode")?;
    let mode = match mode_s.as_str() {
        "exact" => Mode::Exact,
        "monotone" => Mode::Monotone,
        other => return Err(ParseError::at(*mode_line, format!("unknown mode '{other}'")).into()),
    };
    let (n_s, n_line) = get("n")?;
    let n = n_s.parse::<usize>().map_err(|_| ParseError::at(*n_line, format!("bad n '{n_s}'")))?;
    let (eps_s, eps_line) = get("epsilon")?;
    let epsilon = parse_rational(eps_s, *eps_line)?;

    let k = phi2.len();
    let index: BTreeMap<&str, usize> = phi2.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect();
    let mut rho: Vec<usize> = (0..k).collect();
    for (a, b, line) in &rho_pairs {
        let (&ia, &ib) = match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(ParseError::at(*line, format!("rho names an unknown generator in '{a} {b}'")).into()),
        };
        if ia == ib || rho[ia] != ia || rho[ib] != ib {
            return Err(ParseError::at(*line, format!("'{a} {b}' is not a new pair of distinct generators")).into());
        }
        rho[ia] = ib;
        rho[ib] = ia;
    }
    let m = phi.len();
    let mut datum = FloerDatum {
        mode,
        n,
        epsilon,
        phi: phi.into_iter().map(|(p, _)| p).collect(),
        phi2,
        rho,
        d_phi: Mat::zeros(m, m),
        d_phi2: Mat::zeros(k, k),
        d_eq: BTreeMap::new(),
        pants: BTreeMap::new(),
    };
    for (sec, rows, line) in matrices {
        let (want_rows, want_cols) = match sec {
            Section::DPhi => (m, m),
            Section::Pants(..) => (k, m * m),
            _ => (k, k),
        };
        if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
            return Err(ParseError::at(line, format!("section needs {want_rows} rows of {want_cols} bits")).into());
        }
        let mat = Mat::from_fn(want_rows, want_cols, |r, c| rows[r][c]);
        match sec {
            Section::DPhi => datum.d_phi = mat,
            Section::DPhi2 => datum.d_phi2 = mat,
            Section::DEq(i, s) => {
                if i == 0 {
                    return Err(ParseError::at(line, "d_eq levels start at 1").into());
                }
                datum.set_d_level(i, s, mat);
            }
            Section::Pants(i, s) => datum.set_pants_level(i, s, mat),
            _ => unreachable!(),
        }
    }
    datum.check_structure()?;
    Ok(datum)
}
