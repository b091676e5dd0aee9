//! CSV exports: `frame,<stage names...>,total_ms` for timings and
//! `frame,pan_deg,tilt_deg,pan_rate,tilt_rate` for the gimbal trace.

use std::io::{BufRead, Write};

use super::gimbal::GimbalSample;
use super::latency::FrameTiming;
use crate::{Error, Result};

pub fn write_timing_csv<W: Write>(mut w: W, stage_names: &[String], timings: &[FrameTiming]) -> Result<()> {
    writeln!(w, "frame,{},total_ms", stage_names.join(","))?;
    for t in timings {
        write!(w, "{}", t.frame)?;
        for ms in &t.stage_ms {
            write!(w, ",{ms:.3}")?;
        }
        writeln!(w, ",{:.3}", t.total_ms)?;
    }
    Ok(())
}

/// Reads a timing CSV back. Returns the stage names and the frames; the
/// `total_ms` column must match the stage sum.
pub fn read_timing_csv<R: BufRead>(r: R) -> Result<(Vec<String>, Vec<FrameTiming>)> {
    let mut lines = r.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) => {
                let l = l?;
                if !l.trim().is_empty() {
                    break l;
                }
            }
            None => return Err(Error::Parse { line: 1, msg: "missing header".into() }),
        }
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "frame" || cols[cols.len() - 1] != "total_ms" {
        return Err(Error::Parse { line: 1, msg: "header must be frame,<stages...>,total_ms".into() });
    }
    let names: Vec<String> = cols[1..cols.len() - 1].iter().map(|s| s.to_string()).collect();

    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(err(format!("expected {} fields, found {}", cols.len(), fields.len())));
        }
        let frame = fields[0].parse::<usize>().map_err(|_| err(format!("bad frame {:?}", fields[0])))?;
        let nums = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite() && *v >= 0.0)
                    .ok_or_else(|| err(format!("bad value {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let (stages, total) = nums.split_at(nums.len() - 1);
        let t = FrameTiming::new(frame, stages.to_vec());
        if (t.total_ms - total[0]).abs() > 1e-6 {
            return Err(err(format!("total_ms {} does not equal the stage sum {:.3}", total[0], t.total_ms)));
        }
        out.push(t);
    }
    Ok((names, out))
}

pub fn write_gimbal_csv<W: Write>(mut w: W, trace: &[GimbalSample]) -> Result<()> {
    writeln!(w, "frame,pan_deg,tilt_deg,pan_rate,tilt_rate")?;
    for s in trace {
        writeln!(w, "{},{:.6},{:.6},{:.6},{:.6}", s.frame, s.pan, s.tilt, s.pan_rate, s.tilt_rate)?;
    }
    Ok(())
}
