//! Runs the localization, Smith and spectral checks over the built-in
//! data and prints one line per datum.

use equihf::floermodel::{localized_check, smith_check, spectral_checks, validate, Builtin};

fn main() -> equihf::error::Result<()> {
    for b in Builtin::catalogue() {
        let d = b.build()?;
        let valid = validate(&d).is_valid();
        let loc = localized_check(&d)?;
        let smith = smith_check(&d)?;
        let sp = spectral_checks(&d)?;
        println!(
            "{:<18} valid={valid} localized={} ({}->{}) smith={} E2={:?}",
            b.to_string(),
            loc.passes,
            loc.source_dim,
            loc.target_dim,
            smith.chain_holds && smith.quantum_holds,
            sp.e2_levels
        );
    }
    Ok(())
}
