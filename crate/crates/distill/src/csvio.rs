//! Result-table serialization.
//!
//! Columns: `protocol,r,p,t,N,d_over_sigma,fidelity,x_variance,success_prob`.
//! Every float is written in scientific notation with 9 significant digits,
//! which round-trips exactly: parsing an emitted table and re-emitting it
//! reproduces the bytes.

use std::io::{Read, Write};

use gaussmix::protocols::{ProtocolKind, SummaryRow};

use crate::CliError;

/// Column header shared by writer and reader.
pub const HEADER: [&str; 9] = [
    "protocol",
    "r",
    "p",
    "t",
    "N",
    "d_over_sigma",
    "fidelity",
    "x_variance",
    "success_prob",
];

/// Canonical float rendering: scientific, 9 significant digits.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

fn protocol_from_str(name: &str) -> Result<ProtocolKind, CliError> {
    match name {
        "one_shot" => Ok(ProtocolKind::OneShot),
        "multicopy_squeeze" => Ok(ProtocolKind::MulticopySqueeze),
        "multicopy_ent" => Ok(ProtocolKind::MulticopyEnt),
        other => Err(CliError::Config(format!(
            "unknown protocol \"{other}\" in result table"
        ))),
    }
}

/// Write the result table.
pub fn write_summary_csv<W: Write>(writer: W, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(HEADER)
        .map_err(|err| CliError::Engine(format!("cannot write result table: {err}")))?;
    for row in rows {
        out.write_record([
            row.protocol.as_str().to_string(),
            fmt9(row.r),
            fmt9(row.p),
            fmt9(row.t),
            row.n_copies.to_string(),
            fmt9(row.d_over_sigma),
            fmt9(row.fidelity),
            fmt9(row.x_variance),
            fmt9(row.success_prob),
        ])
        .map_err(|err| CliError::Engine(format!("cannot write result table: {err}")))?;
    }
    out.flush()
        .map_err(|err| CliError::Engine(format!("cannot write result table: {err}")))
}

/// Read a result table produced by [`write_summary_csv`].
pub fn read_summary_csv<R: Read>(reader: R) -> Result<Vec<SummaryRow>, CliError> {
    let mut input = csv::Reader::from_reader(reader);
    let header = input
        .headers()
        .map_err(|err| CliError::Config(format!("cannot read result table: {err}")))?;
    if header.len() != HEADER.len() || header.iter().zip(HEADER).any(|(a, b)| a != b) {
        return Err(CliError::Config(format!(
            "unexpected result-table header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let parse_f64 = |field: &str, name: &str, line: u64| {
        field.parse::<f64>().map_err(|_| {
            CliError::Config(format!(
                "record {line}: column \"{name}\": \"{field}\" is not a number"
            ))
        })
    };
    let mut rows = Vec::new();
    for record in input.records() {
        let record =
            record.map_err(|err| CliError::Config(format!("cannot read result table: {err}")))?;
        if record.len() != HEADER.len() {
            return Err(CliError::Config(format!(
                "record {}: expected {} columns, got {}",
                rows.len() + 1,
                HEADER.len(),
                record.len()
            )));
        }
        let line = rows.len() as u64 + 1;
        rows.push(SummaryRow {
            protocol: protocol_from_str(&record[0])?,
            r: parse_f64(&record[1], "r", line)?,
            p: parse_f64(&record[2], "p", line)?,
            t: parse_f64(&record[3], "t", line)?,
            n_copies: record[4].parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "record {line}: column \"N\": \"{}\" is not a count",
                    &record[4]
                ))
            })?,
            d_over_sigma: parse_f64(&record[5], "d_over_sigma", line)?,
            fidelity: parse_f64(&record[6], "fidelity", line)?,
            x_variance: parse_f64(&record[7], "x_variance", line)?,
            success_prob: parse_f64(&record[8], "success_prob", line)?,
        });
    }
    Ok(rows)
}
