//! The complex file format.
//!
//! ```text
//! ring gf2            # gf2, gf2[h] or gf2(h)
//! grading z           # z, z2 or none
//!
//! [generators]
//! x 0                 # name degree [action]
//! y 1 1/2
//!
//! [differential]
//! y x 1               # target source coefficient
//!
//! [involution]
//! perm y x            # images of the generators in order
//! ```
//!
//! An involution may also be given as rows of bits, one row per target.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;

use crate::complexes::{Complex, Generator, Grading, Scalar};
use crate::error::{Error, ParseError, Result};
use crate::scalars::{Gf2, HPoly, HRational, Mat};

#[derive(Clone, Debug, PartialEq)]
pub enum AnyComplex {
    Gf2(Complex<Gf2>),
    Poly(Complex<HPoly>),
    Rational(Complex<HRational>),
}

impl AnyComplex {
    pub fn ring_name(&self) -> &'static str {
        match self {
            AnyComplex::Gf2(_) => Gf2::RING_NAME,
            AnyComplex::Poly(_) => HPoly::RING_NAME,
            AnyComplex::Rational(_) => HRational::RING_NAME,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyComplex::Gf2(c) => c.len(),
            AnyComplex::Poly(c) => c.len(),
            AnyComplex::Rational(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFile {
    pub complex: AnyComplex,
    pub involution: Option<Mat<Gf2>>,
}

impl ComplexFile {
    /// The complex over GF(2), or a precondition error naming `what`.
    pub fn over_gf2(&self, what: &str) -> Result<&Complex<Gf2>> {
        match &self.complex {
            AnyComplex::Gf2(c) => Ok(c),
            other => Err(Error::Precondition(format!("{what} needs a complex over gf2, found {}", other.ring_name()))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Header,
    Generators,
    Differential,
    Involution,
}

struct Entry {
    target: String,
    source: String,
    coeff: String,
    line: usize,
}

pub fn parse_complex_file(text: &str) -> Result<ComplexFile> {
    let mut section = Section::Header;
    let mut header: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut gens: Vec<(Generator, usize)> = Vec::new();
    let mut entries: Vec<Entry> = Vec::new();
    let mut perm: Option<(Vec<String>, usize)> = None;
    let mut rows: Vec<(String, usize)> = Vec::new();
    let mut seen = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| ParseError::at(line, format!("unterminated section header '{content}'")))?;
            section = match name.trim() {
                "generators" => Section::Generators,
                "differential" => Section::Differential,
                "involution" => Section::Involution,
                other => return Err(ParseError::at(line, format!("unknown section '{other}'")).into()),
            };
            if seen.contains(&section) {
                return Err(ParseError::at(line, format!("section '{content}' appears twice")).into());
            }
            seen.push(section);
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::Header => {
                if words.len() != 2 {
                    return Err(ParseError::at(line, format!("expected 'key value', found '{content}'")).into());
                }
                if !matches!(words[0], "ring" | "grading") {
                    return Err(ParseError::at(line, format!("unknown header key '{}'", words[0])).into());
                }
                if header.insert(words[0].into(), (words[1].into(), line)).is_some() {
                    return Err(ParseError::at(line, format!("header key '{}' repeated", words[0])).into());
                }
            }
            Section::Generators => {
                if !(2..=3).contains(&words.len()) {
                    return Err(ParseError::at(line, "a generator is 'name degree [action]'").into());
                }
                let degree = words[1].parse().map_err(|_| ParseError::at(line, format!("bad degree '{}'", words[1])))?;
                let mut g = Generator::new(words[0], degree);
                if let Some(a) = words.get(2) {
                    g = g.with_action(a.parse::<Rational64>().map_err(|_| ParseError::at(line, format!("bad action '{a}'")))?);
                }
                gens.push((g, line));
            }
            Section::Differential => {
                if words.len() != 3 {
                    return Err(ParseError::at(line, "a differential entry is 'target source coefficient'").into());
                }
                entries.push(Entry { target: words[0].into(), source: words[1].into(), coeff: words[2].into(), line });
            }
            Section::Involution => {
                if words[0] == "perm" {
                    if perm.is_some() || !rows.is_empty() {
                        return Err(ParseError::at(line, "give the involution once, as a permutation or as bit rows").into());
                    }
                    perm = Some((words[1..].iter().map(|w| w.to_string()).collect(), line));
                } else {
                    if perm.is_some() {
                        return Err(ParseError::at(line, "give the involution once, as a permutation or as bit rows").into());
                    }
                    rows.push((words.concat(), line));
                }
            }
        }
    }

    let ring = header.get("ring").map(|(r, _)| r.as_str()).unwrap_or("gf2").to_string();
    let grading = match header.get("grading") {
        None => Grading::Z,
        Some((g, line)) => match g.as_str() {
            "z" | "Z" => Grading::Z,
            "z2" | "Z2" => Grading::Z2,
            "none" => Grading::None,
            other => return Err(ParseError::at(*line, format!("unknown grading '{other}'")).into()),
        },
    };

    let mut index = BTreeMap::new();
    for (i, (g, line)) in gens.iter().enumerate() {
        if index.insert(g.name.clone(), i).is_some() {
            return Err(ParseError::at(*line, format!("generator '{}' defined twice", g.name)).into());
        }
    }
    let lookup =
        |name: &str, line: usize| index.get(name).copied().ok_or_else(|| ParseError::at(line, format!("unknown generator '{name}'")));
    let n = gens.len();
    let gens: Vec<Generator> = gens.into_iter().map(|(g, _)| g).collect();

    fn fill<R: Scalar>(
        n: usize,
        entries: &[Entry],
        lookup: &dyn Fn(&str, usize) -> std::result::Result<usize, ParseError>,
        parse: impl Fn(&str) -> Option<R>,
    ) -> Result<Mat<R>> {
        let mut d = Mat::<R>::zeros(n, n);
        for e in entries {
            let (t, s) = (lookup(&e.target, e.line)?, lookup(&e.source, e.line)?);
            let c = parse(&e.coeff)
                .ok_or_else(|| ParseError::at(e.line, format!("bad coefficient '{}' for ring {}", e.coeff, R::RING_NAME)))?;
            d.add_to(t, s, &c);
        }
        Ok(d)
    }
    let complex = match ring.as_str() {
        "gf2" => {
            let d = fill(n, &entries, &lookup, |s| match s {
                "0" => Some(Gf2::ZERO),
                "1" => Some(Gf2::ONE),
                _ => None,
            })?;
            AnyComplex::Gf2(Complex::new(gens, grading, d)?)
        }
        "gf2[h]" => AnyComplex::Poly(Complex::new(gens, grading, fill(n, &entries, &lookup, |s| s.parse::<HPoly>().ok())?)?),
        "gf2(h)" => AnyComplex::Rational(Complex::new(gens, Grading::None, fill(n, &entries, &lookup, |s| s.parse::<HRational>().ok())?)?),
        other => {
            let line = header.get("ring").map_or(1, |(_, l)| *l);
            return Err(ParseError::at(line, format!("unknown ring '{other}'; expected gf2, gf2[h] or gf2(h)")).into());
        }
    };

    let involution = if let Some((images, line)) = perm {
        if images.len() != n {
            return Err(ParseError::at(line, format!("permutation lists {} images for {n} generators", images.len())).into());
        }
        let mut m = Mat::zeros(n, n);
        for (src, img) in images.iter().enumerate() {
            m.set(lookup(img, line)?, src, Gf2::ONE);
        }
        Some(m)
    } else if !rows.is_empty() {
        if rows.len() != n {
            return Err(ParseError::at(rows[0].1, format!("involution has {} rows for {n} generators", rows.len())).into());
        }
        let mut m = Mat::zeros(n, n);
        for (r, (bits, line)) in rows.iter().enumerate() {
            if bits.len() != n {
                return Err(ParseError::at(*line, format!("row has {} entries, expected {n}", bits.len())).into());
            }
            for (c, ch) in bits.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, Gf2::ONE),
                    _ => return Err(ParseError::at(*line, format!("bad bit '{ch}'")).into()),
                }
            }
        }
        Some(m)
    } else {
        None
    };
    Ok(ComplexFile { complex, involution })
}

fn write_complex<R: Scalar + std::fmt::Display>(out: &mut String, c: &Complex<R>) {
    let grading = match c.grading {
        Grading::Z => "z",
        Grading::Z2 => "z2",
        Grading::None => "none",
    };
    let _ = writeln!(out, "ring {}\ngrading {grading}\n\n[generators]", R::RING_NAME);
    for g in &c.gens {
        match g.action {
            Some(a) => writeln!(out, "{} {} {a}", g.name, g.degree),
            None => writeln!(out, "{} {}", g.name, g.degree),
        }
        .expect("writing to a string");
    }
    out.push_str("\n[differential]\n");
    for s in 0..c.len() {
        for t in 0..c.len() {
            let v = c.d.get(t, s);
            if !v.is_zero() {
                let _ = writeln!(out, "{} {} {v}", c.gens[t].name, c.gens[s].name);
            }
        }
    }
}

/// Canonical text: header, generators in order, entries by source then target.
pub fn complex_file_to_text(f: &ComplexFile) -> String {
    let mut out = String::new();
    let names: Vec<String> = match &f.complex {
        AnyComplex::Gf2(c) => {
            write_complex(&mut out, c);
            c.names()
        }
        AnyComplex::Poly(c) => {
            write_complex(&mut out, c);
            c.names()
        }
        AnyComplex::Rational(c) => {
            write_complex(&mut out, c);
            c.names()
        }
    };
    if let Some(m) = &f.involution {
        out.push_str("\n[involution]\n");
        let images: Option<Vec<&str>> = (0..m.cols())
            .map(|c| {
                let col = m.col(c);
                let ones: Vec<usize> = (0..col.len()).filter(|&r| col[r].0).collect();
                (ones.len() == 1).then(|| names[ones[0]].as_str())
            })
            .collect();
        let is_perm = images.as_ref().is_some_and(|imgs| {
            let mut sorted = imgs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == imgs.len()
        });
        match images {
            Some(images) if is_perm => {
                let _ = writeln!(out, "perm {}", images.join(" "));
            }
            _ => {
                for r in 0..m.rows() {
                    let row: String = (0..m.cols()).map(|c| if m.get(r, c).0 { '1' } else { '0' }).collect();
                    let _ = writeln!(out, "{row}");
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP: &str = "ring gf2\n\n[generators]\na 0\nb 0\nc 1\n\n[differential]\nc a 1\nc b 1\n\n[involution]\nperm b a c\n";

    #[test]
    fn parses_and_round_trips() {
        let f = parse_complex_file(SWAP).unwrap();
        assert_eq!(f.complex.len(), 3);
        let m = f.involution.as_ref().unwrap();
        assert!(m.get(1, 0).0 && m.get(0, 1).0 && m.get(2, 2).0);
        let text = complex_file_to_text(&f);
        assert_eq!(parse_complex_file(&text).unwrap(), f);
        assert_eq!(complex_file_to_text(&parse_complex_file(&text).unwrap()), text);
    }

    #[test]
    fn polynomial_coefficients() {
        let f = parse_complex_file("ring gf2[h]\ngrading none\n[generators]\nx 0\ny 0\n[differential]\ny x 1+h^2\n").unwrap();
        match f.complex {
            AnyComplex::Poly(c) => assert_eq!(c.d.get(1, 0).to_string(), "1+h^2"),
            other => panic!("wrong ring {other:?}"),
        }
    }

    #[test]
    fn errors_point_at_lines() {
        let bad = "ring gf2\n[generators]\nx 0\n[differential]\nx z 1\n";
        match parse_complex_file(bad) {
            Err(Error::Parse(e)) => assert_eq!(e.line, Some(5)),
            other => panic!("{other:?}"),
        }
        assert!(parse_complex_file("ring gf3\n").is_err());
        assert!(parse_complex_file("[generators]\nx 0\n[involution]\n01\n").is_err());
    }
}
