//! Synthetic stand-ins for the pricing and classification data, and their
//! CSV form.
//!
//! Prices: header `theta,rho`, one product per row.
//! Population: header `f1,…,fD,label`, one agent per row, label `0` or `1`.

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{tags, RngStream};

use super::strategic::Agent;

pub const DEFAULT_FEATURES: usize = 11;
pub const DEFAULT_SEPARATION: f64 = 2.0;

/// `θ_i ~ U[0.5, 2]`, `ρ_i ~ U[0.25, 0.5]`.
pub fn make_synthetic_prices(seed: u64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::arg("product count must be >= 1"));
    }
    let mut g = RngStream::new(seed, tags::DATA)
        .derive(tags::DATA, 1)
        .generator();
    let theta = (0..n).map(|_| g.random_range(0.5..=2.0)).collect();
    let rho = (0..n).map(|_| g.random_range(0.25..=0.5)).collect();
    Ok((theta, rho))
}

/// Balanced labels (alternating) with features `N(±(sep/2)·1/√d, I)`;
/// the class means are `sep` apart.
pub fn make_synthetic_population(
    seed: u64,
    count: usize,
    features: usize,
    separation: f64,
) -> Result<Vec<Agent>> {
    if count == 0 || features == 0 {
        return Err(Error::arg("population size and feature count must be >= 1"));
    }
    if !separation.is_finite() {
        return Err(Error::arg("separation must be finite"));
    }
    let mut g = RngStream::new(seed, tags::DATA)
        .derive(tags::DATA, 2)
        .generator();
    let shift = 0.5 * separation / (features as f64).sqrt();
    Ok((0..count)
        .map(|i| {
            let label = i % 2 == 1;
            let mean = if label { shift } else { -shift };
            let features = (0..features)
                .map(|_| mean + Distribution::<f64>::sample(&StandardNormal, &mut g))
                .collect();
            Agent { features, label }
        })
        .collect())
}

pub fn write_prices(path: impl AsRef<Path>, theta: &[f64], rho: &[f64]) -> Result<()> {
    if theta.len() != rho.len() {
        return Err(Error::arg("theta and rho lengths differ"));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["theta", "rho"])?;
    for (t, r) in theta.iter().zip(rho) {
        w.write_record([t.to_string(), r.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_prices(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["theta", "rho"] {
        return Err(Error::Data(format!(
            "expected header theta,rho, found {headers:?}"
        )));
    }
    let (mut theta, mut rho) = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        theta.push(parse_field(&rec, 0, line + 2)?);
        rho.push(parse_field(&rec, 1, line + 2)?);
    }
    if theta.is_empty() {
        return Err(Error::Data("price file has no rows".into()));
    }
    Ok((theta, rho))
}

pub fn write_population(path: impl AsRef<Path>, population: &[Agent]) -> Result<()> {
    let d = population.first().map_or(0, |a| a.features.len());
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=d).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for a in population {
        if a.features.len() != d {
            return Err(Error::arg("agents have inconsistent feature counts"));
        }
        let mut row: Vec<String> = a.features.iter().map(|v| v.to_string()).collect();
        row.push(if a.label { "1" } else { "0" }.into());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_population(path: impl AsRef<Path>) -> Result<Vec<Agent>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    let d = headers.len().saturating_sub(1);
    let expected: Vec<String> = (1..=d)
        .map(|i| format!("f{i}"))
        .chain(std::iter::once("label".to_string()))
        .collect();
    if d == 0 || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Data(format!(
            "expected header f1..fD,label, found {headers:?}"
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let features = (0..d)
            .map(|i| parse_field(&rec, i, line + 2))
            .collect::<Result<Vec<_>>>()?;
        let label = match rec.get(d).map(str::trim) {
            Some("1") => true,
            Some("0") => false,
            other => {
                return Err(Error::Data(format!(
                    "line {}: label must be 0 or 1, found {other:?}",
                    line + 2
                )))
            }
        };
        out.push(Agent { features, label });
    }
    if out.is_empty() {
        return Err(Error::Data("population file has no rows".into()));
    }
    Ok(out)
}

fn parse_field(rec: &csv::StringRecord, i: usize, line: usize) -> Result<f64> {
    let raw = rec
        .get(i)
        .ok_or_else(|| Error::Data(format!("line {line}: missing field {}", i + 1)))?;
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::Data(format!("line {line}: '{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Data(format!("line {line}: value is not finite")));
    }
    Ok(v)
}
