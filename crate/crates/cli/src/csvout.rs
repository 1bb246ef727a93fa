//! CSV emission: header row of column names, `.`-decimal values printed
//! with 17 significant digits so every 64-bit float round-trips exactly,
//! LF line endings.

use std::io::Write;
use std::path::Path;

use starwire::SweepTable;

use crate::runner::CliError;

/// Format one value with 17 significant digits (`f64` round-trip exact).
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render the table as CSV text.
pub fn csv_text(table: &SweepTable) -> Result<String, CliError> {
    if table.rows.is_empty() {
        return Err(CliError::Numeric("refusing to emit an empty table".into()));
    }
    let mut out = String::new();
    out.push_str(&table.column_labels().join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Write the table to `path`.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<(), CliError> {
    let text = csv_text(table)?;
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
