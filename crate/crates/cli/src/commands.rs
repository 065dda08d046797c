use std::io::Write;

use serde::Serialize;
use zsi_core::lab::{classify, enumerate_h2, enumerate_h3, Triple};
use zsi_core::{
    eq3_value, find_witness, index, multiplicity_h, norm_table, CyclicOrder, NormalForm,
    ResidueSequence,
};

use crate::error::CliError;

/// Parses `1,1,15,17,28`, optionally wrapped in parentheses.
pub fn parse_sequence_literal(literal: &str) -> Result<Vec<i64>, CliError> {
    let body = literal.trim().trim_start_matches('(').trim_end_matches(')');
    let values = body
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("malformed sequence literal {literal:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(values)
}

pub fn cmd_index(literal: &str, order: u64, verbose: bool) -> Result<String, CliError> {
    let values = parse_sequence_literal(literal)?;
    let order = CyclicOrder::new(order)?;
    let n = order.n();
    let entries = values
        .iter()
        .map(|&v| {
            u64::try_from(v)
                .ok()
                .filter(|x| (1..=n).contains(x))
                .ok_or(CliError::Core(zsi_core::Error::EntryOutOfRange {
                    entry: v,
                    n,
                }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let s = ResidueSequence::new(order, entries)?;
    let cert = index(&s);
    let mut out = format!(
        "sequence={s}\nindex={} norm={}/{}\nwitness m={} norm_prime={}\n",
        cert.index_value(),
        cert.best_norm_prime,
        n,
        cert.best_multiplier,
        cert.best_norm_prime
    );
    if verbose {
        for (m, norm) in norm_table(&s) {
            out.push_str(&format!("m={m} norm_prime={norm}\n"));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ClassifyFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
struct ClassifyJson {
    p: u64,
    families: Vec<Triple>,
    orbit_families: Vec<Vec<u64>>,
}

pub fn cmd_classify(p: u64, format: ClassifyFormat) -> Result<String, CliError> {
    let record = classify(p)?;
    Ok(match format {
        ClassifyFormat::Text => {
            let parts: Vec<String> = record
                .families
                .iter()
                .map(|(x1, x2, x3)| format!("({x1},{x2},{x3})"))
                .collect();
            if parts.is_empty() {
                "none\n".to_string()
            } else {
                format!("{}\n", parts.join(","))
            }
        }
        ClassifyFormat::Json => {
            let body = ClassifyJson {
                p,
                orbit_families: record.orbit_families().into_iter().collect(),
                families: record.families.into_iter().collect(),
            };
            format!("{}\n", serde_json::to_string_pretty(&body)?)
        }
        ClassifyFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x1", "x2", "x3"])?;
            for (x1, x2, x3) in &record.families {
                w.serialize((x1, x2, x3))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
                .expect("csv output is utf-8")
        }
    })
}

pub fn cmd_witness(a: u64, b: u64, c: u64, p: u64) -> Result<String, CliError> {
    let nf = NormalForm::new(a, b, c, p)?;
    let r = find_witness(&nf)?;
    let found = match r.found {
        Some(w) => format!("k={} m={}", w.k, w.m),
        None => "none".to_string(),
    };
    Ok(format!(
        "{found}; k1={} m1={}; eq3={}\n",
        r.k1,
        r.m1,
        eq3_value(&nf, r.k1)
    ))
}

/// Streams `1,1,x1,x2,x3` lines: minimal zero-sum sequences of length 5
/// with an element of multiplicity at least `h_min`, scaled so a repeated
/// element is 1.
pub fn cmd_enumerate<W: Write>(p: u64, h_min: usize, out: &mut W) -> Result<usize, CliError> {
    if !(2..=5).contains(&h_min) {
        return Err(CliError::Usage(format!(
            "--h-min must lie in 2..=5, got {h_min}"
        )));
    }
    let h3 = enumerate_h3(p)?.filter(|s| multiplicity_h(s) >= h_min);
    let all: Box<dyn Iterator<Item = ResidueSequence>> = if h_min == 2 {
        Box::new(enumerate_h2(p)?.chain(h3))
    } else {
        Box::new(h3)
    };
    let mut count = 0;
    for s in all {
        let line: Vec<String> = s.entries().iter().map(u64::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
        count += 1;
    }
    Ok(count)
}
