//! CSV tables for jumpless trajectories and committor evaluations.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::reset::JumplessTrajectory;

/// Columns `tau, ell, S, w_0 .. w_{K-1}, re_0, im_0, ...`.
pub fn write_jumpless_csv<W: Write>(jt: &JumplessTrajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let k = jt.rates.first().map_or(0, |r| r.len());
    let d = jt.states.first().map_or(0, |s| s.len());
    let mut header = vec!["tau".to_string(), "ell".to_string(), "S".to_string()];
    header.extend((0..k).map(|i| format!("w_{i}")));
    for i in 0..d {
        header.push(format!("re_{i}"));
        header.push(format!("im_{i}"));
    }
    w.write_record(&header)?;
    for i in 0..jt.taus.len() {
        let mut row = vec![jt.taus[i].to_string(), jt.arc_length[i].to_string(), jt.survival[i].to_string()];
        row.extend(jt.rates[i].iter().map(|r| r.to_string()));
        for z in jt.states[i].iter() {
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row of a committor or splitting table.
#[derive(Clone, Debug, Serialize)]
pub struct CommittorRow {
    pub psi_id: String,
    pub phase: String,
    pub value: f64,
    pub method: String,
}

/// Columns `psi_id, phase, value, method`.
pub fn write_committor_csv<W: Write>(rows: &[CommittorRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
