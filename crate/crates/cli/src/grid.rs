//! Grid and list arguments.
//!
//! Grids use the `start:step:end` syntax (`0.5:0.05:1.2`), inclusive of both
//! endpoints up to floating-point slack; lists are comma-separated. Parsed
//! grids are nonempty and strictly increasing.

use mcmetric::Error;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| Error::ParameterRange(format!("bad grid start {:?}", parts[0])))?;
        let step: f64 = parts[1]
            .parse()
            .map_err(|_| Error::ParameterRange(format!("bad grid step {:?}", parts[1])))?;
        let end: f64 = parts[2]
            .parse()
            .map_err(|_| Error::ParameterRange(format!("bad grid end {:?}", parts[2])))?;
        if !(step > 0.0) || end < start {
            return Err(Error::ParameterRange(format!(
                "grid {spec:?} must satisfy start <= end and step > 0"
            )));
        }
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = start + step * k as f64;
            if v > end + step * 1e-9 {
                break;
            }
            out.push(v.min(end));
            k += 1;
        }
        return Ok(out);
    }
    // comma list
    let mut out = Vec::new();
    for piece in spec.split(',') {
        out.push(
            piece
                .trim()
                .parse()
                .map_err(|_| Error::ParameterRange(format!("bad grid value {piece:?}")))?,
        );
    }
    if out.is_empty() || out.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ParameterRange(format!(
            "grid {spec:?} must be nonempty and strictly increasing"
        )));
    }
    Ok(out)
}

pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>, Error> {
    let mut out = Vec::new();
    for piece in spec.split(',') {
        out.push(
            piece
                .trim()
                .parse()
                .map_err(|_| Error::ParameterRange(format!("bad list entry {piece:?}")))?,
        );
    }
    if out.is_empty() {
        return Err(Error::ParameterRange("empty list".into()));
    }
    Ok(out)
}
