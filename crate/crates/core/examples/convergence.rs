//! Error against node count with the fitted order, as CSV on stdout.

use std::io::stdout;

use frolov::analysis::{convergence_study, fit_order, write_csv, StudyOptions};
use frolov::{testfunctions, FrolovBasis, Mode, PolyKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let basis = FrolovBasis::new(2, PolyKind::Standard)?;
    let grid = [4.0, 8.0, 16.0, 32.0, 64.0];

    for (label, f, s) in [
        ("bump p=1", testfunctions::bump(2, 1)?, 1),
        ("bump p=2", testfunctions::bump(2, 2)?, 2),
        ("sin^4", testfunctions::sine_power(2, 2)?, 2),
    ] {
        let records = convergence_study(&basis, &f, s, &grid, Mode::Vanishing, StudyOptions::default())?;
        eprintln!("{label}: fitted order {:.3}", fit_order(&records)?);
        write_csv(stdout(), &records)?;
    }
    Ok(())
}
