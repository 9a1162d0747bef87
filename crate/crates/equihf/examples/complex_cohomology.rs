//! Cohomology of a small filtered complex over GF(2), degree by degree, and
//! the pages of the spectral sequence of its action filtration.

use equihf::complexes::{cohomology_by_degree, spectral_sequence, Complex, Filtration, Generator, Grading};
use equihf::scalars::{Gf2, Mat};
use num_rational::Rational64;

fn main() -> equihf::error::Result<()> {
    // d a = d c = b, so only a + c survives.
    let gens = vec![
        Generator::new("a", 0).with_action(Rational64::new(0, 1)),
        Generator::new("c", 0).with_action(Rational64::new(1, 2)),
        Generator::new("b", 1).with_action(Rational64::new(2, 1)),
    ];
    let mut d = Mat::<Gf2>::zeros(3, 3);
    d.set(2, 0, Gf2::ONE);
    d.set(2, 1, Gf2::ONE);
    let cx = Complex::new(gens, Grading::Z, d)?;

    let report = cx.check(true);
    println!("valid: {}", report.is_valid());
    for (deg, dim) in cohomology_by_degree(&cx) {
        println!("H^{deg} = GF(2)^{dim}");
    }

    let ss = spectral_sequence(&cx, &Filtration::decreasing(vec![0, 1, 2]))?;
    for r in 1..=3 {
        let page = ss.page(r);
        println!("E_{r}: total {}  by level {:?}", page.total_dim(), page.dims_by_level());
    }
    Ok(())
}
