//! JSON operator files, point lists and grid specifications.
//!
//! ```json
//! {"space": {"kind": "finite", "dim": 2},
//!  "operators": [{"kind": "dense", "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}]}
//! ```
//!
//! Numbers may also be strings (`"1/3"`, `"0.1"`); both are read exactly.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Mode, Qi, Scalar};
use crate::model::{Atom, CPoint, DiagonalTupleSpec, Direction, FiniteTuple, Multiplicity, ShiftSpec, StructuredPart, StructuredTuple};

/// A parsed operator file.
#[derive(Clone, Debug)]
pub enum Instance {
    Finite(FiniteTuple<Qi>),
    Structured(StructuredTuple),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Finite(t) => t.len(),
            Instance::Structured(t) => t.n(),
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpaceJson {
    Finite { dim: usize },
    L2,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum OperatorJson {
    Dense {
        entries: Vec<Vec<[Value; 2]>>,
    },
    Diagonal {
        n: usize,
        #[serde(default)]
        atoms: Vec<AtomJson>,
        #[serde(default)]
        accumulations: Vec<Vec<[Value; 2]>>,
    },
    Shift {
        direction: Direction,
        #[serde(default)]
        prefix: Vec<[Value; 2]>,
        tail: f64,
    },
}

#[derive(Deserialize)]
struct AtomJson {
    point: Vec<[Value; 2]>,
    mult: Multiplicity,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileJson {
    space: SpaceJson,
    operators: Vec<OperatorJson>,
}

fn number_text(v: &Value) -> Result<String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::Input(format!("expected a number, got {other}"))),
    }
}

fn exact(pair: &[Value; 2]) -> Result<Qi> {
    Qi::parse_parts(&number_text(&pair[0])?, &number_text(&pair[1])?)
}

fn float(pair: &[Value; 2]) -> Result<Complex64> {
    let q = exact(pair)?;
    let z = q.to_c64();
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(z)
}

fn float_point(p: &[[Value; 2]]) -> Result<CPoint> {
    p.iter().map(float).collect()
}

pub fn parse_instance(v: &Value) -> Result<Instance> {
    let file: FileJson = serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("operator file: {e}")))?;
    if file.operators.is_empty() {
        return Err(Error::Input("operator file lists no operators".into()));
    }
    match file.space {
        SpaceJson::Finite { dim } => {
            let mut ops = Vec::new();
            for op in &file.operators {
                let OperatorJson::Dense { entries } = op else {
                    return Err(Error::Input("finite spaces take dense operators only".into()));
                };
                let rows = entries
                    .iter()
                    .map(|r| r.iter().map(exact).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let m = Matrix::from_rows(rows)?;
                if m.shape() != (dim, dim) {
                    return Err(Error::shape("operator file", format!("{:?} matrix in a {dim}-dimensional space", m.shape())));
                }
                ops.push(m);
            }
            Ok(Instance::Finite(FiniteTuple::new(ops)?))
        }
        SpaceJson::L2 => {
            let mut parts = Vec::new();
            for op in &file.operators {
                parts.push(match op {
                    OperatorJson::Dense { .. } => {
                        return Err(Error::Input("dense operators need a finite space".into()))
                    }
                    OperatorJson::Diagonal { n, atoms, accumulations } => {
                        let atoms = atoms
                            .iter()
                            .map(|a| Ok(Atom { point: float_point(&a.point)?, mult: a.mult }))
                            .collect::<Result<Vec<_>>>()?;
                        let acc = accumulations.iter().map(|p| float_point(p)).collect::<Result<Vec<_>>>()?;
                        StructuredPart::Diagonal(DiagonalTupleSpec::new(*n, atoms, acc)?)
                    }
                    OperatorJson::Shift { direction, prefix, tail } => {
                        let prefix = prefix.iter().map(float).collect::<Result<Vec<_>>>()?;
                        StructuredPart::Shift(ShiftSpec::new(*direction, prefix, *tail)?)
                    }
                });
            }
            Ok(Instance::Structured(StructuredTuple::new(parts)?))
        }
    }
}

/// `{"left": …, "right": …}` with two operator files.
pub fn parse_pair(v: &Value) -> Result<(Instance, Instance)> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Input(format!("pair file needs a \"{k}\" entry")));
    Ok((parse_instance(get("left")?)?, parse_instance(get("right")?)?))
}

/// `"re,im;re,im"`, one pair per coordinate.
pub fn parse_point_text(s: &str) -> Result<Vec<(String, String)>> {
    s.split(';')
        .map(|c| {
            let (re, im) = c
                .split_once(',')
                .ok_or_else(|| Error::Input(format!("coordinate {c:?} is not re,im")))?;
            Ok((re.trim().to_string(), im.trim().to_string()))
        })
        .collect()
}

pub fn parse_point<F: Scalar>(s: &str) -> Result<Vec<F>> {
    parse_point_text(s)?
        .iter()
        .map(|(re, im)| {
            let q = Qi::parse_parts(re, im)?;
            match F::MODE {
                Mode::Exact => exact_cast::<F>(&q),
                Mode::Float => {
                    let z = q.to_c64();
                    F::from_f64_parts(z.re, z.im)
                }
            }
        })
        .collect()
}

fn exact_cast<F: Scalar>(q: &Qi) -> Result<F> {
    // Exact mode is `Qi` itself.
    let any: &dyn std::any::Any = q;
    any.downcast_ref::<F>()
        .cloned()
        .ok_or_else(|| Error::Input("exact points need the exact scalar type".into()))
}

/// One axis of a grid: `min:max:steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Cell midpoints, so region boundaries are not hit by construction.
    pub fn samples(&self) -> Vec<f64> {
        let h = (self.max - self.min) / self.steps as f64;
        (0..self.steps).map(|i| self.min + (i as f64 + 0.5) * h).collect()
    }

    pub fn symmetric(radius: f64, steps: usize) -> Axis {
        Axis { min: -radius, max: radius, steps }
    }
}

/// `"a:b:steps[,a:b:steps…]"`: one axis per complex coordinate, used for
/// both the real and imaginary parts; the last axis repeats.
pub fn parse_grid(s: &str) -> Result<Vec<Axis>> {
    s.split(',')
        .map(|a| {
            let f: Vec<&str> = a.split(':').collect();
            let bad = || Error::Input(format!("grid axis {a:?} is not min:max:steps"));
            if f.len() != 3 {
                return Err(bad());
            }
            let min: f64 = f[0].trim().parse().map_err(|_| bad())?;
            let max: f64 = f[1].trim().parse().map_err(|_| bad())?;
            let steps: usize = f[2].trim().parse().map_err(|_| bad())?;
            if !(min < max) || steps == 0 || !min.is_finite() || !max.is_finite() {
                return Err(bad());
            }
            Ok(Axis { min, max, steps })
        })
        .collect()
}

/// All grid points in `ℂⁿ` for the given axes.
pub fn grid_points(axes: &[Axis], n: usize) -> Vec<CPoint> {
    let mut acc: Vec<CPoint> = vec![vec![]];
    for i in 0..n {
        let ax = axes[i.min(axes.len() - 1)];
        let s = ax.samples();
        let plane: Vec<Complex64> = s.iter().flat_map(|&y| s.iter().map(move |&x| Complex64::new(x, y))).collect();
        acc = acc
            .into_iter()
            .flat_map(|p| {
                plane.iter().map(move |z| {
                    let mut q = p.clone();
                    q.push(*z);
                    q
                })
            })
            .collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dense_file() {
        let v = json!({"space": {"kind": "finite", "dim": 2},
            "operators": [{"kind": "dense", "entries": [[[0, 0], ["1/3", 0]], [[0, 0], [0.1, 0]]]}]});
        let Instance::Finite(t) = parse_instance(&v).unwrap() else { panic!() };
        assert_eq!(t.op(0).get(0, 1), &Qi::from_ratio((1, 3), (0, 1)));
        assert_eq!(t.op(0).get(1, 1), &Qi::from_ratio((1, 10), (0, 1)));
    }

    #[test]
    fn structured_file() {
        let v = json!({"space": {"kind": "l2"}, "operators": [
            {"kind": "shift", "direction": "forward", "prefix": [], "tail": 1},
            {"kind": "diagonal", "n": 1, "atoms": [{"point": [[2, 0]], "mult": "inf"}], "accumulations": [[[0, 0]]]}]});
        let Instance::Structured(t) = parse_instance(&v).unwrap() else { panic!() };
        assert_eq!(t.n(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        for v in [
            json!({"space": {"kind": "finite", "dim": 3}, "operators": [{"kind": "dense", "entries": [[[1, 0]]]}]}),
            json!({"space": {"kind": "l2"}, "operators": [{"kind": "dense", "entries": [[[1, 0]]]}]}),
            json!({"space": {"kind": "l2"}, "operators": []}),
            json!({"space": {"kind": "l2"}, "operators": [{"kind": "shift", "direction": "forward", "tail": -1}]}),
            json!({"space": {"kind": "finite", "dim": 1}, "operators": [{"kind": "dense", "entries": [[[true, 0]]]}]}),
        ] {
            assert!(parse_instance(&v).is_err(), "{v}");
        }
    }

    #[test]
    fn points_and_grids() {
        let p: Vec<Qi> = parse_point("0.5,0;2,-1").unwrap();
        assert_eq!(p, vec![Qi::from_ratio((1, 2), (0, 1)), Qi::from_parts(2, -1)]);
        let f: Vec<Complex64> = parse_point("1,1").unwrap();
        assert_eq!(f, vec![Complex64::new(1.0, 1.0)]);
        assert!(parse_point::<Qi>("1").is_err());
        let g = parse_grid("-1.5:1.5:3").unwrap();
        assert_eq!(g[0].samples(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(grid_points(&g, 2).len(), 81);
        assert!(parse_grid("1:0:3").is_err());
    }
}
