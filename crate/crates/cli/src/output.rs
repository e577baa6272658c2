use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Shortest decimal form that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Write `# comment` lines, a header and the rows as CSV.
pub fn write_table<W: Write>(
    mut out: W,
    comments: &[String],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> anyhow::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_file(
    path: &Path,
    comments: &[String],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> anyhow::Result<()> {
    write_table(BufWriter::new(File::create(path)?), comments, header, rows)
}
