//! Field files: optional `#` comment lines, the header `nx,ny,lx,ly`, one
//! line with those four values, then `nx * ny` values in row-major order
//! (`ny` lines of `nx` values, `x` fastest).

use vortinv::field::{Grid, ScalarField};

use crate::error::{CliError, Result};

pub const FIELD_HEADER: &str = "nx,ny,lx,ly";
/// Upper bound on `nx * ny` accepted from a file.
pub const MAX_FIELD_NODES: usize = 1 << 22;

pub fn parse_field_csv(text: &str) -> Result<ScalarField> {
    let bad = |line: usize, message: String| CliError::FieldFormat { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| bad(1, "empty field file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.join(",") != FIELD_HEADER {
        return Err(bad(ln, format!("expected header `{FIELD_HEADER}`")));
    }
    let (ln, dims) = lines.next().ok_or_else(|| bad(ln + 1, "missing grid line".into()))?;
    let dims: Vec<&str> = dims.split(',').map(str::trim).collect();
    if dims.len() != 4 {
        return Err(bad(ln, "grid line needs nx,ny,lx,ly".into()));
    }
    let count = |s: &str| s.parse::<usize>().map_err(|_| bad(ln, format!("`{s}` is not a node count")));
    let extent = |s: &str| s.parse::<f64>().map_err(|_| bad(ln, format!("`{s}` is not a length")));
    let (nx, ny) = (count(dims[0])?, count(dims[1])?);
    let (lx, ly) = (extent(dims[2])?, extent(dims[3])?);
    if nx.checked_mul(ny).is_none_or(|n| n > MAX_FIELD_NODES) {
        return Err(bad(ln, format!("{nx}x{ny} exceeds {MAX_FIELD_NODES} nodes")));
    }
    let grid = Grid::new(nx, ny, lx, ly)?;

    let mut values = Vec::with_capacity(grid.len());
    let mut last = ln;
    for (ln, row) in lines {
        last = ln;
        for tok in row.split(',') {
            let tok = tok.trim();
            if values.len() == grid.len() {
                return Err(bad(ln, format!("more than {} values", grid.len())));
            }
            let v: f64 = tok.parse().map_err(|_| bad(ln, format!("`{tok}` is not a number")))?;
            if !v.is_finite() {
                return Err(bad(ln, format!("non-finite value `{tok}`")));
            }
            values.push(v);
        }
    }
    if values.len() != grid.len() {
        return Err(bad(last, format!("expected {} values, found {}", grid.len(), values.len())));
    }
    Ok(ScalarField::from_values(grid, values)?)
}

/// Writes `f` in the format read by [`parse_field_csv`]. Values use the
/// shortest representation that reads back to the same bits.
pub fn write_field_csv(f: &ScalarField, config_hash: Option<&str>) -> String {
    let g = f.grid();
    let mut out = String::new();
    if let Some(h) = config_hash {
        out.push_str(&format!("# config_hash={h}\n"));
    }
    out.push_str(FIELD_HEADER);
    out.push('\n');
    out.push_str(&format!("{},{},{:?},{:?}\n", g.nx(), g.ny(), g.lx(), g.ly()));
    for row in f.values().chunks(g.nx()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
