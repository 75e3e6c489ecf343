//! CSV writers for scan results, trajectories and range samples.

use std::io::Write;

use crate::criteria::WindowSeries;
use crate::error::Result;
use crate::forms::ScanTable;
use crate::potential::C64;
use crate::regsolve::Trajectory;

pub fn write_series<W: Write>(out: W, series: &WindowSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "value"])?;
    for (x, v) in series.origins.iter().zip(&series.values) {
        w.write_record([x.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Windows without a fitted sector get empty angle and vertex cells.
pub fn write_scan<W: Write>(out: W, table: &ScanTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "window_lo",
        "window_hi",
        "alpha",
        "beta",
        "vertex_re",
        "vertex_im",
        "herm_lambda_min",
        "infmod_lower",
        "infmod_upper",
    ])?;
    for r in &table.rows {
        let sector = match r.sector {
            Some(s) => [s.alpha, s.beta, s.vertex.re, s.vertex.im].map(|x| x.to_string()),
            None => Default::default(),
        };
        let mut rec = vec![r.window_lo.to_string(), r.window_hi.to_string()];
        rec.extend(sector);
        rec.extend([r.herm_lambda_min, r.infmod_lower, r.infmod_upper].map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y_re", "y_im", "y1_re", "y1_im"])?;
    for (x, st) in traj.nodes.iter().zip(&traj.states) {
        w.write_record([*x, st.y.re, st.y.im, st.y1.re, st.y1.im].map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_points<W: Write>(out: W, points: &[C64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im"])?;
    for z in points {
        w.write_record([z.re.to_string(), z.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
