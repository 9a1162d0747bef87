use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::format::{parse_complex_file, AnyComplex, ComplexFile};
use super::report::Report;
use super::{read_input, Command, Context};
use crate::complexes::{cohomology_by_degree, module_cohomology, total_cohomology, CheckReport, Complex, Scalar};
use crate::equivariant::{
    group_cohomology, kaledin_check, smith_bound_check, tate_dimension, truncation_agrees, verify_u_sequence, InvolutiveComplex,
};
use crate::error::{Error, ParseError, Result};
use crate::floermodel::{
    hf_eq_invariants, hf_poly_invariants, localized_check, parse_datum, smith_check, spectral_checks, transfer, validate, Builtin,
    FloerDatum,
};
use crate::morseflow::{codim1_faces, corner_count, corner_label, enumerate_strata, relation_string, Sign, Space};
use crate::scalars::{Field, FieldCohomology};
use crate::symplinalg::{
    build_blocks, component_invariant, conley_zehnder, is_admissible, krein_index, local_constancy_holds, parse_blocks, parse_path,
    representative_blocks, verify_cz_krein, BlockSpec, SympMatrix, Tolerances,
};

const PERTURBATION: f64 = 1e-6;
const PERTURBATION_SAMPLES: usize = 10;

pub(crate) fn execute(cmd: &Command, echo: &str, ctx: &Context<'_>) -> Result<Report> {
    match cmd {
        Command::Check(input) => {
            let (text, f) = load_complex(&input.file, ctx)?;
            check(echo, &text, &f)
        }
        Command::Cohomology(input) => {
            let (text, f) = load_complex(&input.file, ctx)?;
            cohomology(echo, &text, &f)
        }
        Command::Equivariant { input, max_truncation } => {
            let (text, f) = load_complex(&input.file, ctx)?;
            let w = involutive(&f, "equivariant")?;
            let inv = group_cohomology(&w);
            let u = verify_u_sequence(&w);
            let mut r = Report::new(echo, text.as_bytes());
            r.value("free_rank", inv.free_rank)
                .value("torsion_exponents", &inv.torsion_exponents)
                .value("generator_count", inv.generator_count)
                .value("h_v_dim", w.cohomology().dim())
                .verdict("truncation_cross_check", truncation_agrees(&w, &inv, *max_truncation), vec![])
                .verdict("u_sequence_exact", u.exact, vec![format!("truncation N = {}", u.truncation)]);
            if w.cohomology().dim() == 0 {
                r.verdict("acyclicity_transfer", inv.is_zero(), vec![]);
            }
            Ok(r)
        }
        Command::Tate(input) => {
            let (text, f) = load_complex(&input.file, ctx)?;
            let w = involutive(&f, "tate")?;
            let t = tate_dimension(&w);
            let inv = group_cohomology(&w);
            let mut r = Report::new(echo, text.as_bytes());
            r.value("tate_dim", t).value("free_rank", inv.free_rank).verdict("tate_equals_free_rank", t == inv.free_rank, vec![]);
            Ok(r)
        }
        Command::Kaledin(input) => {
            let (text, f) = load_complex(&input.file, ctx)?;
            let c = f.over_gf2("kaledin")?;
            if !c.check(false).d_squared_zero {
                return Err(Error::Precondition("kaledin needs d^2 = 0; run `check`".into()));
            }
            let k = kaledin_check(c);
            let mut r = Report::new(echo, text.as_bytes());
            r.value("source_dim", k.source_dim).value("target_dim", k.target_dim).value("rank", k.rank).verdict(
                "squaring_bijective",
                k.bijective,
                vec![],
            );
            Ok(r)
        }
        Command::SmithBound(input) => {
            let (text, f) = load_complex(&input.file, ctx)?;
            let s = smith_bound_check(&involutive(&f, "smith-bound")?);
            let mut r = Report::new(echo, text.as_bytes());
            r.value("invariant_dim", s.invariant_dim).value("generator_count", s.generator_count).value("free_rank", s.free_rank).verdict(
                "smith_bound",
                s.holds,
                vec![format!("{} >= {} >= {}", s.invariant_dim, s.generator_count, s.free_rank)],
            );
            Ok(r)
        }
        Command::Krein { matrix, blocks } => {
            let a = match (matrix, blocks) {
                (Some(m), _) => SympMatrix::with_default_tol(parse_real_matrix(m)?)?,
                (None, Some(b)) => build_blocks(&parse_blocks(b)?, Tolerances::default())?,
                (None, None) => return Err(ParseError::new("krein needs --matrix or --blocks").into()),
            };
            let k = krein_index(&a)?;
            let inv = component_invariant(&a)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut stable = true;
            for _ in 0..PERTURBATION_SAMPLES {
                stable &= local_constancy_holds(&mut rng, &a, PERTURBATION)?;
            }
            let mut r = Report::new(echo, echo.as_bytes());
            r.value("n", a.n)
                .value("kappa", k.kappa)
                .value("e_dim", k.e_dim)
                .value("det_sign", inv.sign)
                .value("seed", ctx.seed)
                .table(
                    "eigenvalue_clusters",
                    &["re", "im", "multiplicity", "signature"],
                    k.eigen_clusters
                        .iter()
                        .map(|c| vec![format!("{:.6}", c.re), format!("{:.6}", c.im), c.multiplicity.to_string(), c.signature.to_string()])
                        .collect(),
                )
                .verdict("admissible", is_admissible(inv.sign, k.kappa, a.n), vec![])
                .verdict("locally_constant", stable, vec![format!("{PERTURBATION_SAMPLES} perturbations of size {PERTURBATION:e}")]);
            Ok(r)
        }
        Command::Cz { path, n } => {
            let p = parse_path(path, *n)?;
            let mu = conley_zehnder(&p)?;
            let end = SympMatrix::with_default_tol(p.endpoint())?;
            let det = end.det_i_minus();
            let mut r = Report::new(echo, echo.as_bytes());
            r.value("n", p.n()).value("mu", mu).value("path", p.to_string()).verdict(
                "parity",
                (mu.rem_euclid(2) == 0) == (det > 0.0),
                vec![format!("det(I - A) = {det:.6e}")],
            );
            Ok(r)
        }
        Command::CzKrein { blocks, lift } => {
            let blocks = parse_blocks(blocks)?;
            let planes = blocks.iter().map(|b| b.kind().planes()).sum();
            let lift = lift.as_deref().map(|l| parse_path(l, Some(planes))).transpose()?;
            let c = verify_cz_krein(&blocks, lift, Tolerances::default())?;
            let mut r = Report::new(echo, echo.as_bytes());
            r.value("n", c.n)
                .value("kappa", c.kappa)
                .value("mu", c.mu)
                .value("mu_square", c.mu_square)
                .value("kappa_minus_n", c.lhs)
                .value("mu_square_minus_2mu", c.rhs)
                .verdict("cz_krein", c.holds, vec![format!("{} = {}", c.lhs, c.rhs)])
                .verdict("kappa_parity", c.kappa_parity, vec![])
                .verdict("mu_parity", c.mu_parity, vec![]);
            Ok(r)
        }
        Command::Blocks { sign, kappa, n } => blocks_command(echo, sign.as_deref(), *kappa, *n),
        Command::Strata { space, i, sigma, codim } => {
            let space: Space = space.parse()?;
            let sigma: Sign = sigma.parse()?;
            let strata = enumerate_strata(space, *i, sigma, *codim)?;
            let rows = strata
                .iter()
                .map(|s| vec![s.to_string(), s.codim().to_string(), s.dim().to_string(), corner_label(s).unwrap_or_default()])
                .collect();
            let mut r = Report::new(echo, echo.as_bytes());
            r.value("count", strata.len()).table("strata", &["stratum", "codim", "dim", "corner"], rows);
            if space == Space::P {
                let corners = enumerate_strata(space, *i, sigma, None)?.iter().filter(|s| s.dim() == 0).count();
                r.value("corners", corners).verdict(
                    "corner_count",
                    corners as u64 == corner_count(*i),
                    vec![format!("expected 2^(i-1)(i+1) = {}", corner_count(*i))],
                );
            }
            Ok(r)
        }
        Command::Faces { i, sigma } => {
            let sigma: Sign = sigma.parse()?;
            let faces = codim1_faces(*i, sigma);
            let expected = if *i == 0 { 0 } else { 4 * i - 2 };
            let mut r = Report::new(echo, echo.as_bytes());
            r.value("count", faces.len())
                .value("relation", relation_string(*i, sigma))
                .table("faces", &["stratum", "term"], faces.iter().map(|f| vec![f.stratum.to_string(), f.term.to_string()]).collect())
                .verdict("face_count", faces.len() == expected, vec![format!("expected 4i - 2 = {expected}")]);
            Ok(r)
        }
        Command::FloerValidate(input) => {
            let (text, d) = load_datum(&input.file, ctx)?;
            let v = validate(&d);
            let mut r = datum_report(echo, &text, &d);
            for c in v.checks {
                r.verdict(c.name, c.passed, c.diagnostics);
            }
            Ok(r)
        }
        Command::FloerLocalize(input) => {
            let (text, d) = load_datum(&input.file, ctx)?;
            let l = localized_check(&d)?;
            let s = spectral_checks(&d)?;
            let mut r = datum_report(echo, &text, &d);
            r.value("hf_phi_dim", l.hf_phi_dim)
                .value("localized_source_dim", l.source_dim)
                .value("localized_target_dim", l.target_dim)
                .value("e2_levels", &s.e2_levels)
                .value("e2_expected", &s.e2_expected)
                .verdict("pants_chain_map", l.chain_map, l.defect.iter().map(|(i, y, ab)| format!("level {i}: {ab} -> {y}")).collect())
                .verdict("localized_bijective", l.bijective, l.induced_rank.iter().map(|k| format!("induced rank {k}")).collect())
                .verdict("dimensions_match", l.dims_match, vec![format!("{} / {} / {}", l.hf_phi_dim, l.source_dim, l.target_dim)]);
            if let Some(diag) = l.e0_diagonal {
                r.verdict("e0_diagonal", diag, vec![]);
            }
            r.verdict("e0_criterion_agrees", l.e0_bijective == l.bijective, vec![]).verdict(
                "h_adic_e2",
                s.h_adic_agrees,
                vec![format!("E2 {:?}, expected {:?}", s.e2_levels, s.e2_expected)],
            );
            if let Some(e1) = s.action_e1 {
                r.value("action_e1", e1).verdict(
                    "action_e1",
                    s.action_agrees,
                    vec![format!("E1 {e1}, dim CF(phi) {}", s.action_e1_expected)],
                );
            }
            Ok(r)
        }
        Command::FloerSmith(input) => {
            let (text, d) = load_datum(&input.file, ctx)?;
            let s = smith_check(&d)?;
            let eq = hf_eq_invariants(&d)?;
            let poly = hf_poly_invariants(&d)?;
            let mut r = datum_report(echo, &text, &d);
            r.value("hf_phi_dim", s.hf_phi_dim)
                .value("hf_phi2_dim", s.hf_phi2_dim)
                .value("invariant_dim", s.invariant_dim)
                .value("hf_eq_free_rank", eq.free_rank)
                .value("hf_eq_torsion_exponents", &eq.torsion_exponents)
                .value("hf_poly_free_rank", poly.free_rank)
                .value("hf_poly_factors", &poly.invariant_factors)
                .value("hf_poly_dim", poly.gf2_dim)
                .value("localized_dim", s.localized_dim)
                .verdict(
                    "smith_chain",
                    s.chain_holds,
                    vec![format!("{} >= {} >= {} = {}", s.invariant_dim, s.generator_count, s.free_rank, s.localized_dim)],
                )
                .verdict("quantum_smith", s.quantum_holds, vec![format!("{} >= {}", s.invariant_dim, s.hf_phi_dim)])
                .verdict("completion_consistent", poly.agrees_with_hf_eq, vec![]);
            Ok(r)
        }
        Command::FloerTransfer { input, plus } => {
            let (text, d) = load_datum(&input.file, ctx)?;
            let names: Option<Vec<String>> = plus.as_ref().map(|p| p.split(',').map(|s| s.trim().to_string()).collect());
            let t = transfer(&d, names.as_deref())?;
            let mut r = datum_report(echo, &text, &d);
            r.value("plus_set", &t.plus_set)
                .value("d_transferred", &t.d_transferred)
                .value("h_dim", t.h_dim)
                .value("orbit_count", t.orbit_count)
                .value("hf_poly_dim", t.hf_poly_dim)
                .value("iterations", t.iterations);
            for c in &t.side_conditions {
                r.verdict(format!("side condition {}", c.name), c.holds, vec![]);
            }
            r.verdict("matches_hf_poly", t.consistent, vec![format!("dim H(D) = {}, dim HF_poly = {:?}", t.h_dim, t.hf_poly_dim)]);
            Ok(r)
        }
        Command::Example { .. } | Command::Batch { .. } => Err(Error::Precondition("not a report command".into())),
    }
}

pub(crate) fn example(name: &str, i: Option<usize>, n: Option<usize>, kappa: Option<i64>) -> Result<String> {
    let b = if name.contains('(') { name.parse()? } else { Builtin::from_parts(name, i, n, kappa)? };
    Ok(b.build()?.to_text())
}

fn load_complex(file: &str, ctx: &Context<'_>) -> Result<(String, ComplexFile)> {
    let text = read_input(file, ctx)?;
    let f = parse_complex_file(&text)?;
    Ok((text, f))
}

fn load_datum(file: &str, ctx: &Context<'_>) -> Result<(String, FloerDatum)> {
    if let Some(name) = file.strip_prefix("builtin:") {
        let d = name.parse::<Builtin>()?.build()?;
        return Ok((d.to_text(), d));
    }
    let text = read_input(file, ctx)?;
    let d = parse_datum(&text)?;
    Ok((text, d))
}

fn datum_report(echo: &str, text: &str, d: &FloerDatum) -> Report {
    let mut r = Report::new(echo, text.as_bytes());
    r.value("mode", d.mode.name()).value("phi_points", d.m()).value("phi2_points", d.k());
    r
}

fn involutive(f: &ComplexFile, what: &str) -> Result<InvolutiveComplex> {
    let c = f.over_gf2(what)?.clone();
    let iota = f.involution.clone().ok_or_else(|| Error::Precondition(format!("{what} needs an [involution] section")))?;
    InvolutiveComplex::new(c, iota)
}

fn check_verdicts(r: &mut Report, c: &CheckReport) {
    r.verdict("d_squared_zero", c.d_squared_zero, c.d_squared_nonzero.iter().map(|(t, s)| format!("d^2({s}) has a term on {t}")).collect())
        .verdict(
            "degrees",
            c.grading_violations.is_empty(),
            c.grading_violations
                .iter()
                .map(|v| format!("{} -> {} ({}) has degree {}", v.source, v.target, v.coefficient, v.degree))
                .collect(),
        )
        .verdict(
            "action_filtration",
            c.action_violations.is_empty(),
            c.action_violations.iter().map(|v| format!("{} -> {} lowers the action", v.source, v.target)).collect(),
        );
}

fn check_any(f: &ComplexFile) -> CheckReport {
    match &f.complex {
        AnyComplex::Gf2(c) => c.check(false),
        AnyComplex::Poly(c) => c.check(false),
        AnyComplex::Rational(c) => c.check(false),
    }
}

fn check(echo: &str, text: &str, f: &ComplexFile) -> Result<Report> {
    let mut r = Report::new(echo, text.as_bytes());
    r.value("ring", f.complex.ring_name()).value("generators", f.complex.len());
    check_verdicts(&mut r, &check_any(f));
    if let Some(iota) = &f.involution {
        let c = f.over_gf2("an involution")?;
        let id = crate::scalars::Mat::identity(c.len());
        r.verdict("involution", iota.mul(iota) == id, vec![]).verdict("involution_commutes", iota.mul(&c.d) == c.d.mul(iota), vec![]);
    }
    Ok(r)
}

fn field_table<R: Field + Scalar>(r: &mut Report, c: &Complex<R>) {
    let by_degree = cohomology_by_degree(c);
    r.value("total_dim", total_cohomology(&c.d)).table(
        "cohomology",
        &["degree", "dim"],
        by_degree.iter().map(|(d, n)| vec![d.to_string(), n.to_string()]).collect(),
    );
}

fn cohomology(echo: &str, text: &str, f: &ComplexFile) -> Result<Report> {
    let status = check_any(f);
    if !status.d_squared_zero || !status.grading_violations.is_empty() {
        return Err(Error::Precondition("cohomology needs d^2 = 0 and a differential of degree one; run `check`".into()));
    }
    let mut r = Report::new(echo, text.as_bytes());
    r.value("ring", f.complex.ring_name());
    match &f.complex {
        AnyComplex::Gf2(c) => field_table(&mut r, c),
        AnyComplex::Rational(c) => {
            r.value("total_dim", FieldCohomology::of(&c.d).dim());
        }
        AnyComplex::Poly(c) => {
            let h = module_cohomology(&c.d);
            r.value("free_rank", h.free_rank)
                .value("torsion_factors", &h.torsion_factors)
                .value("local_torsion_exponents", &h.local_torsion_exponents)
                .value("torsion_dim", h.torsion_dim);
        }
    }
    Ok(r)
}

fn parse_sign(s: &str) -> Result<i8> {
    match s.trim() {
        "+" | "+1" | "1" | "plus" => Ok(1),
        "-" | "-1" | "minus" => Ok(-1),
        other => Err(ParseError::new(format!("expected a sign + or -, got '{other}'")).into()),
    }
}

fn describe(blocks: &[BlockSpec]) -> String {
    blocks.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn blocks_command(echo: &str, sign: Option<&str>, kappa: Option<i64>, n: usize) -> Result<Report> {
    let mut r = Report::new(echo, echo.as_bytes());
    r.value("n", n);
    match (sign, kappa) {
        (Some(s), Some(k)) => {
            let s = parse_sign(s)?;
            let blocks = representative_blocks(s, k, n)?;
            let inv = component_invariant(&build_blocks(&blocks, Tolerances::default())?)?;
            r.value("blocks", describe(&blocks)).value("kappa", inv.kappa).value("det_sign", inv.sign).verdict(
                "round_trip",
                inv.sign == s && inv.kappa == k,
                vec![],
            );
        }
        (None, None) => {
            let mut rows = Vec::new();
            let mut ok = true;
            for s in [1i8, -1] {
                for k in -(n as i64) - 1..=n as i64 + 1 {
                    let admissible = is_admissible(s, k, n);
                    let (text, good) = match representative_blocks(s, k, n) {
                        Ok(b) => {
                            let inv = component_invariant(&build_blocks(&b, Tolerances::default())?)?;
                            (describe(&b), admissible && inv.sign == s && inv.kappa == k)
                        }
                        Err(_) => ("rejected".to_string(), !admissible),
                    };
                    ok &= good;
                    rows.push(vec![format!("{s:+}"), k.to_string(), admissible.to_string(), text, good.to_string()]);
                }
            }
            r.table("components", &["sign", "kappa", "admissible", "representative", "ok"], rows).verdict("classification", ok, vec![]);
        }
        _ => return Err(ParseError::new("blocks needs both --sign and --kappa, or neither").into()),
    }
    Ok(r)
}

/// `a, b; c, d` or `[[a, b], [c, d]]`; entries may be multiples of `pi`.
fn parse_real_matrix(s: &str) -> Result<DMatrix<f64>> {
    let cleaned = s.trim().trim_start_matches('[').trim_end_matches(']');
    let rows: Vec<Vec<f64>> = cleaned
        .split([';', ']'])
        .map(|row| row.trim().trim_start_matches(',').trim().trim_start_matches('['))
        .filter(|row| !row.is_empty())
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(crate::symplinalg::path::parse_real)
                .collect::<std::result::Result<Vec<f64>, ParseError>>()
        })
        .collect::<std::result::Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(ParseError::new("the matrix must be square with one row per ';'").into());
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_matrices_in_both_spellings() {
        let a = parse_real_matrix("2, 0; 0, 0.5").unwrap();
        let b = parse_real_matrix("[[2, 0], [0, 0.5]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a[(1, 1)], 0.5);
        assert!(parse_real_matrix("1, 2; 3").is_err());
    }
}
