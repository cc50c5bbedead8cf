//! Output files. Every file is written to a temporary sibling and renamed
//! into place, so a reader sees either the complete file or none.

use std::io::Write;
use std::path::Path;

use radgas::functionals::CSV_COLUMNS;
use radgas::{Grid64, Record64, State64};

use crate::CliError;

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn diagnostics_csv(records: &[Record64]) -> Result<Vec<u8>, CliError> {
    csv_bytes(&CSV_COLUMNS, records.iter().map(Record64::csv_row))
}

pub fn table_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, CliError> {
    csv_bytes(header, rows)
}

/// `snapshot_t<t>.dat`
pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t}.dat")
}

/// `# t=<t>` then one `x v u theta z` row per cell; `u` is the mean of the
/// two nodes bounding the cell.
pub fn snapshot_text(state: &State64, grid: &Grid64) -> String {
    let mut out = format!("# t={}\n", state.t);
    for i in 0..grid.n {
        let u = 0.5 * (state.u[i] + state.u[i + 1]);
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            grid.cell_centers[i], state.v[i], u, state.theta[i], state.z[i]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_creates_directories() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/c.txt");
        write_atomic(&path, b"hello").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "hello");
        write_atomic(&path, b"again").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "again");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn snapshot_layout() {
        let grid = radgas::domain::build_grid(1.0, 8).unwrap();
        let state = State64::equilibrium(8);
        let text = snapshot_text(&state, &grid);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# t=0"));
        assert_eq!(lines.clone().count(), 8);
        assert!(lines.all(|l| l.split_whitespace().count() == 5));
        assert_eq!(snapshot_name(2.5), "snapshot_t2.5.dat");
        assert_eq!(snapshot_name(10.0), "snapshot_t10.dat");
    }
}
