//! File formats: two-column `x,y` CSV for series, JSON for strokes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Result, StenoError};
use crate::series::TimeSeries;
use crate::stroke::StrokeRecord;

/// Parses CSV with a one-line header and `x,y` rows.
pub fn read_series_csv<R: Read>(reader: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(StenoError::InvalidSeries(format!(
                "row {} has {} columns, expected 2",
                line + 2,
                rec.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                StenoError::InvalidSeries(format!("row {}: `{s}` is not a number", line + 2))
            })
        };
        xs.push(parse(&rec[0])?);
        ys.push(parse(&rec[1])?);
    }
    TimeSeries::new(xs, ys)
}

pub fn load_series_csv(path: &Path) -> Result<TimeSeries> {
    read_series_csv(fs::File::open(path)?)
}

pub fn write_series_csv<W: Write>(series: &TimeSeries, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["x", "y"])?;
    for (x, y) in series.xs().iter().zip(series.ys()) {
        wtr.write_record([x.to_string(), y.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_series_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    write_series_csv(series, fs::File::create(path)?)
}

/// Reads and validates a stroke file.
pub fn load_stroke_json(path: &Path) -> Result<StrokeRecord> {
    let stroke: StrokeRecord = serde_json::from_reader(fs::File::open(path)?)?;
    stroke.validate()?;
    Ok(stroke)
}

pub fn save_stroke_json(stroke: &StrokeRecord, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_vec(stroke)?)?;
    Ok(())
}
