//! JSON shape files.
//!
//! ```json
//! {"kind":"radial","n":4,"intervals":[[0.1,1.0002]]}
//! {"kind":"star","L":4,"r0":1.0,"coeffs":{"2,0":0.1},"grid":[64,128]}
//! ```
//!
//! Star shapes may carry an optional `"center":[x,y,z]`. Unknown fields are
//! rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::SphereGrid;
use super::{RadialSet, StarSurface};
use crate::error::{Error, Result};

/// Either shape representation.
#[derive(Clone, Debug)]
pub enum Shape {
    Radial(RadialSet),
    Star(StarSurface),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ShapeFile {
    Radial(RadialFile),
    Star(StarFile),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadialFile {
    n: usize,
    intervals: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarFile {
    #[serde(rename = "L")]
    max_degree: usize,
    r0: f64,
    #[serde(default)]
    coeffs: BTreeMap<String, f64>,
    #[serde(default = "default_grid")]
    grid: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 3]>,
}

fn default_grid() -> [usize; 2] {
    [SphereGrid::DEFAULT_POLAR, SphereGrid::DEFAULT_AZIMUTH]
}

fn parse_mode(key: &str) -> Result<(usize, i64)> {
    let bad = || Error::Parse(format!("field `coeffs`: key {key:?} is not of the form \"l,m\""));
    let (l, m) = key.split_once(',').ok_or_else(bad)?;
    let l = l.trim().parse::<usize>().map_err(|_| bad())?;
    let m = m.trim().parse::<i64>().map_err(|_| bad())?;
    Ok((l, m))
}

pub fn shape_from_json(text: &str) -> Result<Shape> {
    let file: ShapeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match file {
        ShapeFile::Radial(r) => {
            let intervals = r.intervals.iter().map(|&[a, b]| (a, b)).collect();
            RadialSet::new(r.n, intervals)
                .map(Shape::Radial)
                .map_err(|e| Error::Parse(format!("field `intervals`: {e}")))
        }
        ShapeFile::Star(s) => {
            let mut coeffs = BTreeMap::new();
            for (k, v) in &s.coeffs {
                coeffs.insert(parse_mode(k)?, *v);
            }
            let [p, a] = s.grid;
            if p == 0 || a == 0 {
                return Err(Error::Parse("field `grid`: sizes must be positive".into()));
            }
            StarSurface::new(s.max_degree, s.r0, &coeffs, s.center.unwrap_or([0.0; 3]), SphereGrid::new(p, a))
                .map(Shape::Star)
                .map_err(|e| Error::Parse(format!("field `coeffs`/`r0`: {e}")))
        }
    }
}

pub fn shape_to_json(shape: &Shape) -> String {
    let file = match shape {
        Shape::Radial(r) => ShapeFile::Radial(RadialFile {
            n: r.n(),
            intervals: r.intervals().iter().map(|&(a, b)| [a, b]).collect(),
        }),
        Shape::Star(s) => ShapeFile::Star(StarFile {
            max_degree: s.max_degree(),
            r0: s.r0(),
            coeffs: s.coeff_map().into_iter().map(|((l, m), c)| (format!("{l},{m}"), c)).collect(),
            grid: [s.grid().n_polar(), s.grid().n_azimuth()],
            center: (s.center() != [0.0; 3]).then_some(s.center()),
        }),
    };
    serde_json::to_string(&file).expect("shape serialization cannot fail")
}

pub fn read_shape(path: &Path) -> Result<Shape> {
    let text = std::fs::read_to_string(path)?;
    shape_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Measured;

    #[test]
    fn reads_both_documented_forms() {
        let r = shape_from_json(r#"{"kind":"radial","n":4,"intervals":[[0.1,1.0002]]}"#).unwrap();
        let Shape::Radial(r) = r else { panic!() };
        assert_eq!(r.n(), 4);
        assert_eq!(r.intervals(), &[(0.1, 1.0002)]);

        let s = shape_from_json(r#"{"kind":"star","L":4,"r0":1.0,"coeffs":{"2,0":0.1},"grid":[16,32]}"#).unwrap();
        let Shape::Star(s) = s else { panic!() };
        assert_eq!(s.max_degree(), 4);
        assert_eq!(s.coeff(2, 0), 0.1);
        assert_eq!(s.grid().n_polar(), 16);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(shape_from_json(r#"{"kind":"radial","n":4,"intervals":[[0.1,1.0]],"extra":1}"#).is_err());
        assert!(shape_from_json(r#"{"kind":"star","L":2,"r0":1.0,"color":"red"}"#).is_err());
        assert!(shape_from_json(r#"{"kind":"blob"}"#).is_err());
        let e = shape_from_json(r#"{"kind":"radial","n":3,"intervals":[[0.5,0.2]]}"#).unwrap_err();
        assert!(e.to_string().contains("intervals"), "{e}");
        let e = shape_from_json(r#"{"kind":"star","L":2,"r0":1.0,"coeffs":{"2":0.1}}"#).unwrap_err();
        assert!(e.to_string().contains("coeffs"), "{e}");
    }

    #[test]
    fn json_round_trip_preserves_geometry() {
        let s = shape_from_json(r#"{"kind":"star","L":3,"r0":0.9,"coeffs":{"2,-1":0.05,"3,2":-0.02},"grid":[24,48],"center":[0.1,0.0,-0.2]}"#).unwrap();
        let back = shape_from_json(&shape_to_json(&s)).unwrap();
        let (Shape::Star(a), Shape::Star(b)) = (s, back) else { panic!() };
        assert_eq!(a.center(), b.center());
        assert!((a.volume() - b.volume()).abs() < 1e-15);
    }
}
