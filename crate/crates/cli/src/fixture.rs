use std::path::Path;

use vortinv::field::{Grid, ScalarField};
use vortinv::fixtures::Fixture;

use crate::error::{CliError, Result};
use crate::fieldio::parse_field_csv;

/// Parses `taylor`, `constant:C`, `mode:M,N[,AMP]`, `random-stream:SEED,MODES`,
/// or `file:PATH`. File paths are not touched here.
pub fn parse_fixture_spec(spec: &str) -> Result<Fixture> {
    Ok(spec.parse::<Fixture>()?)
}

/// Initial vorticity for `fixture` on `grid`; field files must match the grid.
pub fn initial_vorticity(fixture: &Fixture, grid: Grid) -> Result<ScalarField> {
    match fixture {
        Fixture::File(p) => {
            let path = Path::new(p);
            let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => CliError::MissingFile(path.to_path_buf()),
                _ => CliError::io(format!("reading {p}"), e),
            })?;
            let f = parse_field_csv(&text)?;
            if *f.grid() != grid {
                let g = f.grid();
                return Err(CliError::Inconsistent(format!(
                    "{p} holds a {}x{} field on [0,{}]x[0,{}], the run uses {}x{} on [0,{}]x[0,{}]",
                    g.nx(),
                    g.ny(),
                    g.lx(),
                    g.ly(),
                    grid.nx(),
                    grid.ny(),
                    grid.lx(),
                    grid.ly()
                )));
            }
            Ok(f)
        }
        other => Ok(other.vorticity(grid)?),
    }
}
