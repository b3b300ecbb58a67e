//! The `lorcomp-cset v1` text format.
//!
//! ```text
//! lorcomp-cset v1
//! ambient minkowski 0
//! provenance inherited
//! points 3
//! 0 0 0
//! 1 1.5 0.25
//! 2 -
//! links 1
//! 0 1
//! tau 1
//! 0 1 1.479019945774904
//! ```
//!
//! `ambient` and `provenance` are optional. Points without coordinates are
//! written as `index -`. The `tau` section may be omitted; `τ` is then
//! recomputed from the ambient when every point has coordinates, and set to
//! link counts otherwise. `#` starts a comment.

use std::io::{BufRead, Write};

use serde_json::{json, Value};

use super::{Ambient, DiscreteSpace, IntrinsicMode, Provenance, Relation, SpaceError, TauSource};
use crate::model::ModelPoint;

pub const CSET_HEADER: &str = "lorcomp-cset v1";

impl DiscreteSpace {
    /// `τ` can be rebuilt from the ambient on load.
    fn tau_is_reconstructible(&self) -> bool {
        self.provenance() == Provenance::Inherited
            && self.ambient().is_some()
            && (0..self.len()).all(|i| self.coords(i).is_some())
    }
}

/// Writes `sp`. The `tau` section is skipped for inherited spaces whose `τ`
/// follows from the ambient, unless `force_tau` is set.
pub fn write_cset<W: Write>(sp: &DiscreteSpace, mut w: W, force_tau: bool) -> std::io::Result<()> {
    writeln!(w, "{CSET_HEADER}")?;
    if let Some(a) = sp.ambient() {
        writeln!(w, "ambient {} {}", a.kind(), a.parameter())?;
    }
    writeln!(w, "provenance {}", sp.provenance().as_str())?;
    writeln!(w, "points {}", sp.len())?;
    for i in 0..sp.len() {
        match sp.coords(i) {
            Some(p) => writeln!(w, "{i} {} {}", p.time, p.space)?,
            None => writeln!(w, "{i} -")?,
        }
    }
    writeln!(w, "links {}", sp.link_count())?;
    for i in 0..sp.len() {
        for &j in sp.links(i) {
            writeln!(w, "{i} {j}")?;
        }
    }
    if force_tau || !sp.tau_is_reconstructible() {
        let entries = sp.tau_entries();
        writeln!(w, "tau {}", entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{i} {j} {v}")?;
        }
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-empty line with comments stripped.
    fn next(&mut self) -> Result<Option<(usize, String)>, SpaceError> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let body = l.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                return Ok(Some((self.line, body.to_string())));
            }
        }
        Ok(None)
    }

    fn expect(&mut self) -> Result<(usize, String), SpaceError> {
        self.next()?.ok_or(SpaceError::Parse {
            line: self.line + 1,
            message: "unexpected end of file".into(),
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> SpaceError {
    SpaceError::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, SpaceError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn section_count(line: usize, body: &str, name: &str) -> Result<usize, SpaceError> {
    let mut it = body.split_whitespace();
    if it.next() != Some(name) {
        return Err(parse_err(line, format!("expected '{name}' section")));
    }
    let n = field(line, it.next(), "count")?;
    if it.next().is_some() {
        return Err(parse_err(line, "trailing tokens"));
    }
    Ok(n)
}

pub fn read_cset<R: BufRead>(reader: R) -> Result<DiscreteSpace, SpaceError> {
    let mut lines = Lines {
        inner: reader.lines(),
        line: 0,
    };
    let (ln, header) = lines.expect()?;
    if header != CSET_HEADER {
        return Err(parse_err(ln, format!("expected header '{CSET_HEADER}'")));
    }
    let mut ambient = None;
    let mut provenance = None;
    let (mut ln, mut body) = lines.expect()?;
    loop {
        let mut it = body.split_whitespace();
        match it.next() {
            Some("ambient") => {
                let kind: String = field(ln, it.next(), "ambient kind")?;
                let param: f64 = field(ln, it.next(), "ambient parameter")?;
                ambient = Some(
                    Ambient::from_kind(&kind, param)
                        .ok_or_else(|| parse_err(ln, format!("unknown ambient '{kind} {param}'")))?,
                );
            }
            Some("provenance") => {
                let p: String = field(ln, it.next(), "provenance")?;
                provenance =
                    Some(Provenance::parse(&p).ok_or_else(|| parse_err(ln, format!("unknown provenance '{p}'")))?);
            }
            _ => break,
        }
        (ln, body) = lines.expect()?;
    }

    let n = section_count(ln, &body, "points")?;
    let mut coords = vec![None; n];
    for _ in 0..n {
        let (ln, body) = lines.expect()?;
        let mut it = body.split_whitespace();
        let i: usize = field(ln, it.next(), "point index")?;
        if i >= n {
            return Err(parse_err(ln, format!("point index {i} out of range")));
        }
        match it.next() {
            Some("-") => {}
            t => {
                let t: f64 = field(ln, t, "time coordinate")?;
                let x: f64 = field(ln, it.next(), "space coordinate")?;
                coords[i] = Some(ModelPoint::new(t, x));
            }
        }
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
    }

    let (ln, body) = lines.expect()?;
    let m = section_count(ln, &body, "links")?;
    let mut links = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, body) = lines.expect()?;
        let mut it = body.split_whitespace();
        let i: usize = field(ln, it.next(), "link source")?;
        let j: usize = field(ln, it.next(), "link target")?;
        if i >= n || j >= n {
            return Err(parse_err(ln, "link endpoint out of range"));
        }
        links.push((i, j));
    }

    let mut tau = None;
    if let Some((ln, body)) = lines.next()? {
        let k = section_count(ln, &body, "tau")?;
        let mut entries = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, body) = lines.expect()?;
            let mut it = body.split_whitespace();
            let i: usize = field(ln, it.next(), "tau source")?;
            let j: usize = field(ln, it.next(), "tau target")?;
            let v: f64 = field(ln, it.next(), "tau value")?;
            if i >= n || j >= n {
                return Err(parse_err(ln, "tau endpoint out of range"));
            }
            entries.push((i, j, v));
        }
        if let Some((ln, _)) = lines.next()? {
            return Err(parse_err(ln, "unexpected content after tau section"));
        }
        tau = Some(entries);
    }

    let has_coords = ambient.is_some() && coords.iter().all(Option::is_some);
    match tau {
        Some(entries) => DiscreteSpace::build(
            coords,
            ambient,
            provenance.unwrap_or(Provenance::Explicit),
            Relation::Pairs(links),
            TauSource::Explicit(entries),
        ),
        None if has_coords => DiscreteSpace::build(
            coords,
            ambient,
            provenance.unwrap_or(Provenance::Inherited),
            Relation::Pairs(links),
            TauSource::Ambient,
        ),
        None => DiscreteSpace::build(
            coords,
            ambient,
            Provenance::Intrinsic,
            Relation::Pairs(links),
            TauSource::Explicit(Vec::new()),
        )?
        .tau_intrinsic(IntrinsicMode::LinkCount),
    }
}

/// Structured export with the same content as the text format.
pub fn to_json(sp: &DiscreteSpace) -> Value {
    let points: Vec<Value> = (0..sp.len())
        .map(|i| match sp.coords(i) {
            Some(p) => json!({ "index": i, "t": p.time, "x": p.space }),
            None => json!({ "index": i }),
        })
        .collect();
    let links: Vec<Value> = (0..sp.len())
        .flat_map(|i| sp.links(i).iter().map(move |&j| json!([i, j])))
        .collect();
    let tau: Vec<Value> = sp.tau_entries().into_iter().map(|(i, j, v)| json!([i, j, v])).collect();
    json!({
        "format": CSET_HEADER,
        "ambient": sp.ambient().map(|a| json!({ "kind": a.kind(), "parameter": a.parameter() })),
        "provenance": sp.provenance().as_str(),
        "points": points,
        "links": links,
        "tau": tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpace;

    fn sample() -> DiscreteSpace {
        DiscreteSpace::from_ambient(
            vec![
                ModelPoint::new(0.0, 0.0),
                ModelPoint::new(1.5, 0.25),
                ModelPoint::new(3.0, -0.5),
                ModelPoint::new(1.0, 2.0),
            ],
            Ambient::model(ModelSpace::minkowski()),
        )
        .unwrap()
    }

    fn round_trip(sp: &DiscreteSpace, force: bool) -> DiscreteSpace {
        let mut buf = Vec::new();
        write_cset(sp, &mut buf, force).unwrap();
        read_cset(buf.as_slice()).unwrap()
    }

    #[test]
    fn inherited_round_trip() {
        let sp = sample();
        for force in [false, true] {
            let back = round_trip(&sp, force);
            assert_eq!(back.tau_entries(), sp.tau_entries());
            assert_eq!(back.provenance(), Provenance::Inherited);
            assert_eq!(back.link_count(), sp.link_count());
        }
    }

    #[test]
    fn explicit_without_coordinates() {
        let text =
            "lorcomp-cset v1\npoints 3\n0 -\n1 -\n2 -\nlinks 2\n0 1 # first\n1 2\ntau 3\n0 1 1\n1 2 1\n0 2 2.5\n";
        let sp = read_cset(text.as_bytes()).unwrap();
        assert_eq!(sp.tau(0, 2), 2.5);
        assert_eq!(sp.provenance(), Provenance::Explicit);
        assert_eq!(round_trip(&sp, false).tau_entries(), sp.tau_entries());
    }

    #[test]
    fn missing_tau_uses_link_counts() {
        let text = "lorcomp-cset v1\npoints 3\n0 -\n1 -\n2 -\nlinks 2\n0 1\n1 2\n";
        let sp = read_cset(text.as_bytes()).unwrap();
        assert_eq!(sp.tau(0, 2), 2.0);
        assert_eq!(sp.provenance(), Provenance::Intrinsic);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = read_cset("lorcomp-cset v1\npoints 2\n0 0 0\n1 x 0\nlinks 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SpaceError::Parse { line: 4, .. }), "{err}");
        assert!(read_cset("cset v2\n".as_bytes()).is_err());
    }

    #[test]
    fn json_export_shape() {
        let v = to_json(&sample());
        assert_eq!(v["format"], CSET_HEADER);
        assert_eq!(v["points"].as_array().unwrap().len(), 4);
        assert_eq!(v["ambient"]["kind"], "minkowski");
    }
}
