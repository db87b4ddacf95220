//! CSV and JSON formats for point sets, intersections and weights.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a file back reproduces every coordinate exactly.

use std::io::{Read, Write};

use nalgebra::DVector;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{Codim2Intersection, Weight};
use crate::element::{format_word, parse_word};
use crate::error::{Error, Result};
use crate::limits::{PointSet, Provenance};
use crate::projective::{causal_character, from_chart_coords};
use crate::scalar::Real;
use crate::system::GeometricSystem;

fn num<T: Real>(x: T) -> String {
    format!("{}", x.as_f64())
}

fn parse_num<T: Real>(field: &str, line: u64) -> Result<T> {
    field
        .trim()
        .parse::<f64>()
        .map(T::lit)
        .map_err(|_| Error::Parse(format!("line {line}: bad number '{field}'")))
}

pub fn points_header(rank: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
    h.extend(["kind", "source_word", "conjugator_word", "bnorm"].map(String::from));
    h
}

/// Writes `x1..xn,kind,source_word,conjugator_word,bnorm`, one row per point.
/// An empty set needs `rank` for its header.
pub fn write_points_csv<T: Real, W: Write>(out: W, set: &PointSet<T>, rank: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(points_header(rank))?;
    for (p, prov) in set.iter() {
        let mut row: Vec<String> = p.coords().iter().map(|x| num(*x)).collect();
        row.push(prov.kind.name().to_string());
        row.push(format_word(&prov.source_word));
        row.push(format_word(&prov.conjugator_word));
        row.push(num(p.bnorm()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a point CSV back into a set with the given merge radius. Points
/// whose coordinates sum to zero are read as directions at infinity.
pub fn read_points_csv<T: Real, R: Read>(input: R, sys: &GeometricSystem<T>, dedup_eps: f64) -> Result<PointSet<T>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let rank = header.iter().take_while(|h| h.starts_with('x')).count();
    if header.iter().collect::<Vec<_>>() != points_header(rank) {
        return Err(Error::Parse(format!("unexpected header: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    if rank != sys.rank() {
        return Err(Error::RankMismatch(rank, sys.rank()));
    }
    let mut set = PointSet::new(dedup_eps);
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let coords: Vec<T> = (0..rank).map(|i| parse_num(&rec[i], line)).collect::<Result<_>>()?;
        let point = from_chart_coords(sys.form(), DVector::from_vec(coords))?;
        let prov = Provenance {
            kind: rec[rank].parse()?,
            source_word: parse_word(&rec[rank + 1], rank)?,
            conjugator_word: parse_word(&rec[rank + 2], rank)?,
        };
        set.insert(point, prov);
    }
    Ok(set)
}

#[derive(Serialize)]
struct JsonPoint {
    coords: Vec<f64>,
    affine: bool,
    kind: &'static str,
    source_word: String,
    conjugator_word: String,
    bnorm: f64,
}

/// JSON mirror of a point CSV with a free-form metadata block.
pub fn points_json<T: Real>(set: &PointSet<T>, metadata: Value) -> Value {
    let points: Vec<JsonPoint> = set
        .iter()
        .map(|(p, prov)| JsonPoint {
            coords: p.coords().iter().map(|x| x.as_f64()).collect(),
            affine: p.is_affine(),
            kind: prov.kind.name(),
            source_word: format_word(&prov.source_word),
            conjugator_word: format_word(&prov.conjugator_word),
            bnorm: p.bnorm().as_f64(),
        })
        .collect();
    json!({ "metadata": metadata, "dedup_eps": set.dedup_eps(), "points": points })
}

/// Writes `root1_word,root2_word,pairing,kind,x1..xn`. Coordinates are the
/// chart point of a rank-3 intersection and empty otherwise.
pub fn write_intersections_csv<T: Real, W: Write>(
    out: W,
    sys: &GeometricSystem<T>,
    list: &[Codim2Intersection<T>],
) -> Result<()> {
    let n = sys.rank();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["root1_word", "root2_word", "pairing", "kind"].map(String::from).to_vec();
    header.extend((1..=n).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for ci in list {
        let mut row = vec![
            format_word(&ci.pair.0.word),
            format_word(&ci.pair.1.word),
            num(ci.pairing),
            ci.kind.name().to_string(),
        ];
        match ci.point(sys) {
            Some(p) => row.extend(p.coords().iter().map(|x| num(*x))),
            None => row.extend(std::iter::repeat_n(String::new(), n)),
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Weights with their B-norms and causal characters.
pub fn weights_json<T: Real>(sys: &GeometricSystem<T>, weights: &[Weight<T>]) -> Value {
    let list: Vec<Value> = weights
        .iter()
        .map(|w| {
            json!({
                "index": w.index,
                "vector": w.vector.iter().map(|x| x.as_f64()).collect::<Vec<_>>(),
                "bnorm": sys.bilinear(&w.vector, &w.vector).as_f64(),
                "character": causal_character(sys.form(), &w.vector).name(),
            })
        })
        .collect();
    json!({ "graph": serde_json::from_str::<Value>(&sys.graph().to_json()).unwrap_or(Value::Null), "weights": list })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate;
    use crate::graph::CoxeterGraph;
    use crate::limits::{sample_limit_roots, PointKind, SampleOptions};

    #[test]
    fn csv_round_trip_is_exact() {
        let s = GeometricSystem::<f64>::new(CoxeterGraph::builtin("fig1a").unwrap()).unwrap();
        let store = enumerate(&s, 5).unwrap();
        let set = sample_limit_roots(&s, &store, 3..=4, 0..=1, &SampleOptions::default())
            .unwrap()
            .points;
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &set, 4).unwrap();
        let back = read_points_csv(buf.as_slice(), &s, set.dedup_eps()).unwrap();
        assert_eq!(back.len(), set.len());
        for ((p, a), (q, b)) in set.iter().zip(back.iter()) {
            assert_eq!(p.coords(), q.coords());
            assert_eq!(a, b);
        }
        let mut again = Vec::new();
        write_points_csv(&mut again, &back, 4).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn points_at_infinity_survive() {
        let s = GeometricSystem::<f64>::new(CoxeterGraph::universal(3, 1.0).unwrap()).unwrap();
        let mut set = PointSet::new(1e-6);
        let d = DVector::from_vec(vec![1.0, -1.0, 0.0]) / 2f64.sqrt();
        set.insert(
            from_chart_coords(s.form(), d).unwrap(),
            Provenance {
                kind: PointKind::Orbit,
                source_word: vec![],
                conjugator_word: vec![0, 1],
            },
        );
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &set, 3).unwrap();
        let back = read_points_csv(buf.as_slice(), &s, 1e-6).unwrap();
        assert!(!back.points()[0].is_affine());
        assert_eq!(back.provenance()[0].conjugator_word, vec![0, 1]);
    }

    #[test]
    fn bad_input_is_rejected() {
        let s = GeometricSystem::<f64>::new(CoxeterGraph::universal(3, 1.0).unwrap()).unwrap();
        let wrong_rank = "x1,x2,kind,source_word,conjugator_word,bnorm\n0.5,0.5,orbit,e,e,0\n";
        assert!(matches!(read_points_csv(wrong_rank.as_bytes(), &s, 1e-6), Err(Error::RankMismatch(2, 3))));
        let bad = "x1,x2,x3,kind,source_word,conjugator_word,bnorm\n0.5,q,0,orbit,e,e,0\n";
        assert!(matches!(read_points_csv(bad.as_bytes(), &s, 1e-6), Err(Error::Parse(_))));
        let empty = PointSet::<f64>::new(1e-6);
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &empty, 3).unwrap();
        assert!(read_points_csv(buf.as_slice(), &s, 1e-6).unwrap().is_empty());
    }
}
