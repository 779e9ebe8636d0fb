//! Initial data: analytic families satisfying `u(0) = 0`, and the `r,u,v`
//! CSV format.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::state::FieldState;

/// Radial profile, odd in `r` so that the parity rule applies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Profile {
    Zero,
    /// `2A · arctan(r / s)`
    Arctan { amplitude: f64, scale: f64 },
    /// `A · r · exp(-(r / s)²)`
    Bump { amplitude: f64, scale: f64 },
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Profile::Zero => Ok(()),
            Profile::Arctan { amplitude, scale } | Profile::Bump { amplitude, scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidParameter(format!("profile scale must be positive, got {scale}")));
                }
                if !amplitude.is_finite() {
                    return Err(Error::InvalidParameter("profile amplitude must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Arctan { amplitude, scale } => 2.0 * amplitude * (r / scale).atan(),
            Profile::Bump { amplitude, scale } => {
                let x = r / scale;
                amplitude * r * (-x * x).exp()
            }
        }
    }

    /// `d/dr` of the profile.
    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Arctan { amplitude, scale } => 2.0 * amplitude * scale / (scale * scale + r * r),
            Profile::Bump { amplitude, scale } => {
                let x = r / scale;
                amplitude * (1.0 - 2.0 * x * x) * (-x * x).exp()
            }
        }
    }
}

/// Where the initial state comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileSpec {
    Analytic { displacement: Profile, velocity: Profile },
    FromFile(PathBuf),
}

impl ProfileSpec {
    pub fn zero() -> Self {
        ProfileSpec::Analytic {
            displacement: Profile::Zero,
            velocity: Profile::Zero,
        }
    }

    pub fn at_rest(displacement: Profile) -> Self {
        ProfileSpec::Analytic {
            displacement,
            velocity: Profile::Zero,
        }
    }
}

/// Samples the initial data at the cell centers at `t = 0`.
///
/// Analytic profiles also fix the frozen outer ghosts at `r_N`, `r_{N+1}`.
pub fn build_initial(spec: &ProfileSpec, grid: &RadialGrid) -> Result<FieldState> {
    match spec {
        ProfileSpec::Analytic { displacement, velocity } => {
            displacement.validate()?;
            velocity.validate()?;
            let n = grid.cells();
            let rs = grid.centers();
            let u = rs.iter().map(|&r| displacement.eval(r)).collect();
            let v = rs.iter().map(|&r| velocity.eval(r)).collect();
            let outer = [displacement.eval(grid.center(n)), displacement.eval(grid.center(n + 1))];
            FieldState::new(0.0, u, v, outer, grid)
        }
        ProfileSpec::FromFile(path) => load_initial_csv(path, grid),
    }
}

pub fn load_initial_csv(path: &Path, grid: &RadialGrid) -> Result<FieldState> {
    let file = std::fs::File::open(path).map_err(|e| Error::InitialData {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    read_initial_csv(file, grid).map_err(|e| match e {
        Error::InitialData { message, .. } => Error::InitialData {
            path: path.to_path_buf(),
            message,
        },
        other => Error::InitialData {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })
}

/// Reads a `r,u,v` table. Rows must sit on the grid centers (to within
/// `1e-9 · dr`) in increasing order. Outer ghosts are extrapolated linearly
/// from the last two cells.
pub fn read_initial_csv(reader: impl Read, grid: &RadialGrid) -> Result<FieldState> {
    let bad = |message: String| Error::InitialData {
        path: PathBuf::new(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["r", "u", "v"] {
        return Err(bad(format!("expected header `r,u,v`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let n = grid.cells();
    let tol = 1e-9 * grid.dr();
    let (mut u, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (j, record) in rdr.records().enumerate() {
        let record = record?;
        let row = j + 2;
        if record.len() != 3 {
            return Err(bad(format!("line {row}: expected 3 fields, found {}", record.len())));
        }
        let mut vals = [0.0; 3];
        for (k, slot) in vals.iter_mut().enumerate() {
            let field = &record[k];
            *slot = field
                .parse::<f64>()
                .map_err(|_| bad(format!("line {row}: cannot parse `{field}`")))?;
            if !slot.is_finite() {
                return Err(bad(format!("line {row}: non-finite value `{field}`")));
            }
        }
        if j >= n {
            return Err(bad(format!("more than {n} rows")));
        }
        let expected = grid.center(j);
        if (vals[0] - expected).abs() > tol {
            return Err(bad(format!("line {row}: r = {} but cell {j} is centered at {expected}", vals[0])));
        }
        u.push(vals[1]);
        v.push(vals[2]);
    }
    if u.len() != n {
        return Err(bad(format!("expected {n} rows, found {}", u.len())));
    }
    let slope = u[n - 1] - u[n - 2];
    let outer = [u[n - 1] + slope, u[n - 1] + 2.0 * slope];
    FieldState::new(0.0, u, v, outer, grid)
}

/// Writes `state` as `r,u,v` with shortest round-trip float formatting, so
/// that reading the file back reproduces the values bit for bit.
pub fn write_initial_csv(state: &FieldState, grid: &RadialGrid, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["r", "u", "v"])?;
    for j in 0..state.len() {
        w.write_record([
            grid.center(j).to_string(),
            state.u[j].to_string(),
            state.v[j].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn zero_family() {
        let g = make_grid(1.0, 16).unwrap();
        let s = build_initial(&ProfileSpec::zero(), &g).unwrap();
        assert!(s.u.iter().chain(&s.v).all(|&x| x == 0.0));
        assert_eq!(s.t, 0.0);
    }

    #[test]
    fn arctan_at_its_scale() {
        let p = Profile::Arctan { amplitude: 1.0, scale: 1.0 };
        assert!((p.eval(1.0) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(p.eval(0.0), 0.0);
    }

    #[test]
    fn families_vanish_linearly_at_origin() {
        // u0(r)/r stays bounded as r → 0, uniformly in the grid
        let fams = [
            Profile::Arctan { amplitude: 1.3, scale: 0.2 },
            Profile::Bump { amplitude: 2.0, scale: 0.3 },
        ];
        for p in fams {
            let slope0 = p.derivative(0.0);
            for n in [8, 64, 512, 4096] {
                let g = make_grid(1.0, n).unwrap();
                let r0 = g.center(0);
                assert!((p.eval(r0) / r0).abs() <= slope0.abs() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn rejects_bad_scale() {
        let g = make_grid(1.0, 16).unwrap();
        let spec = ProfileSpec::at_rest(Profile::Bump { amplitude: 1.0, scale: 0.0 });
        assert!(build_initial(&spec, &g).is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let g = make_grid(1.3, 37).unwrap();
        let spec = ProfileSpec::Analytic {
            displacement: Profile::Arctan { amplitude: 0.9, scale: 0.17 },
            velocity: Profile::Bump { amplitude: -0.4, scale: 0.5 },
        };
        let s = build_initial(&spec, &g).unwrap();
        let mut buf = Vec::new();
        write_initial_csv(&s, &g, &mut buf).unwrap();
        let back = read_initial_csv(buf.as_slice(), &g).unwrap();
        assert_eq!(back.u, s.u);
        assert_eq!(back.v, s.v);
        let mut again = Vec::new();
        write_initial_csv(&back, &g, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    fn dump(n: usize) -> Vec<u8> {
        let g = make_grid(1.0, n).unwrap();
        let s = build_initial(&ProfileSpec::at_rest(Profile::Arctan { amplitude: 1.0, scale: 0.5 }), &g).unwrap();
        let mut buf = Vec::new();
        write_initial_csv(&s, &g, &mut buf).unwrap();
        buf
    }

    #[test]
    fn short_file_rejected() {
        let g = make_grid(1.0, 16).unwrap();
        let text = String::from_utf8(dump(16)).unwrap();
        let short: Vec<&str> = text.lines().take(16).collect();
        let err = read_initial_csv(short.join("\n").as_bytes(), &g).unwrap_err();
        assert!(err.to_string().contains("expected 16 rows"), "{err}");
    }

    #[test]
    fn infinite_value_rejected() {
        let g = make_grid(1.0, 8).unwrap();
        let text = String::from_utf8(dump(8)).unwrap();
        let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
        let r = lines[3].split(',').next().unwrap().to_owned();
        lines[3] = format!("{r},inf,0");
        let err = read_initial_csv(lines.join("\n").as_bytes(), &g).unwrap_err();
        assert!(err.to_string().contains("non-finite"), "{err}");
    }

    #[test]
    fn mismatched_grid_rejected() {
        let g = make_grid(2.0, 16).unwrap();
        assert!(read_initial_csv(dump(16).as_slice(), &g).is_err());
        let bad_header = b"radius,u,v\n0.1,0,0\n";
        assert!(read_initial_csv(&bad_header[..], &make_grid(1.0, 8).unwrap()).is_err());
    }
}
