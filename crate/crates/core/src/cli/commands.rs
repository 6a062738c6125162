use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::*;
use super::parse::{parse_cone, parse_dseq, parse_ladder, parse_u, parse_v};
use crate::contfrac::{cf_expand_quad, cf_expand_rational, mt_liminf_witnesses_from_cf, scaled_quotient_sup, CFExpansion, CfBudget};
use crate::diophantine::{record_scan, ProductQuery, Q0Window, RealParam, RecordSequence};
use crate::dimension::{box_dim_estimate, exceptional_scan, exceptional_scan_ladder, PointSet1D, UGrid};
use crate::error::{Error, Result};
use crate::lattice::{
    cone_orbit_profile, correspondence_check_g, correspondence_check_mt, ConeName, Correspondence, CorrespondenceCap,
    LatticePoint, SearchCap,
};
use crate::padic::{PrecisionMode, Prime};

/// What a subcommand produced, before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub csv: Vec<u8>,
    pub summary: Value,
    /// Human-readable lines for stderr.
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(csv: Vec<u8>, summary: Value, text: String) -> Self {
        Outcome { csv, summary, text, code: 0 }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let mode = cfg.precision;
    match &cfg.command {
        Command::MtScan(a) => {
            let q = ProductQuery::mt(parse_u(&a.u)?, Prime::new(a.p)?, a.qmax);
            scan(q, a.stop_below, mode)
        }
        Command::GmtScan(a) => {
            let p = Prime::new(a.p)?;
            let window = Q0Window { q0_min: a.q0_min, q0_max: a.q0_max, allow_negative: !a.positive_only };
            let q = ProductQuery::gmt(parse_u(&a.u)?, parse_v(&a.v, p)?, window, a.qmax);
            scan(q, a.stop_below, mode)
        }
        Command::Dadic(a) => {
            let q = ProductQuery::dadic(parse_u(&a.u)?, parse_dseq(&a.d)?, a.qmax);
            scan(q, a.stop_below, mode)
        }
        Command::Furstenberg(a) => furstenberg(a, cfg.seed, mode),
        Command::Cf(a) => cf(a),
        Command::Orbit(a) => orbit(a),
        Command::Exceptional(a) => exceptional(a),
        Command::Boxdim(a) => boxdim(a),
    }
}

fn scan(mut q: ProductQuery, stop: Option<f64>, mode: PrecisionMode) -> Result<Outcome> {
    q = q.with_mode(mode);
    if let Some(s) = stop {
        q = q.stop_below(s);
    }
    let rs = record_scan(&q)?;
    let mut csv = Vec::new();
    rs.write_csv(&mut csv)?;
    let text = records_text(&rs);
    Ok(Outcome::ok(csv, rs.to_json(), text))
}

fn records_text(rs: &RecordSequence) -> String {
    match rs.argmin() {
        Some(r) => format!(
            "{} records up to q = {}; min {:e} at q = {}{}",
            rs.records.len(),
            rs.horizon,
            r.value(),
            r.q,
            r.q0.map_or(String::new(), |x| format!(", q0 = {x}"))
        ),
        None => format!("no records up to q = {}", rs.horizon),
    }
}

fn furstenberg(a: &FurstenbergArgs, seed: u64, mode: PrecisionMode) -> Result<Outcome> {
    let (p1, p2) = (Prime::new(a.p1)?, Prime::new(a.p2)?);
    if p1 == p2 {
        return Err(Error::InvalidInput("p1 and p2 must differ".into()));
    }
    let Some(count) = a.random else {
        let u = parse_u(a.u.as_deref().unwrap_or_default())?;
        return scan(ProductQuery::furstenberg(u, p1, p2, a.qmax), a.stop_below, mode);
    };
    let threshold = a.stop_below.unwrap_or(0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let us: Vec<f64> = (0..count).map(|_| rng.gen::<f64>()).collect();
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["index", "u", "q", "value", "found"])?;
    let mut found = 0;
    let mut worst = 0f64;
    for (i, &u) in us.iter().enumerate() {
        let q = ProductQuery::furstenberg(RealParam::Float(u), p1, p2, a.qmax).with_mode(mode).stop_below(threshold);
        let rs = record_scan(&q)?;
        let (arg_q, value) = rs.argmin().map_or((0, f64::INFINITY), |r| (r.q, r.value()));
        let hit = value < threshold;
        found += hit as usize;
        worst = worst.max(value);
        out.write_record([i.to_string(), format!("{u:e}"), arg_q.to_string(), format!("{value:e}"), hit.to_string()])?;
    }
    let csv = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let text = format!("{found}/{count} below {threshold}; worst min {worst:e}");
    let summary = json!({ "count": count, "found": found, "threshold": threshold, "worst_min": worst });
    Ok(Outcome::ok(csv, summary, text))
}

fn expansion_json(e: &CFExpansion) -> Value {
    let s = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    json!({ "preperiod": s(&e.preperiod), "period": s(&e.period), "exact": e.exact })
}

fn cf(a: &CfArgs) -> Result<Outcome> {
    let p = Prime::new(a.p)?;
    match parse_u(&a.u)? {
        RealParam::Rational(r) => {
            let e = cf_expand_rational(&r);
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(["index", "quotient"])?;
            for (i, x) in e.quotients().enumerate() {
                out.write_record([i.to_string(), x.to_string()])?;
            }
            let csv = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            let text = format!("rational: {} partial quotients", e.preperiod.len());
            Ok(Outcome::ok(csv, json!({ "expansion": expansion_json(&e) }), text))
        }
        RealParam::Quadratic(u) => {
            let e = cf_expand_quad(&u);
            let sup = scaled_quotient_sup(&u, p, a.kmax, a.len);
            let ws = mt_liminf_witnesses_from_cf(&u, p, CfBudget { k_max: a.kmax, len_max: a.len });
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(["q", "k", "n", "product"])?;
            for w in ws.iter().filter(|w| w.product < a.below) {
                out.write_record([w.q.to_string(), w.k.to_string(), w.n.to_string(), format!("{:e}", w.product)])?;
            }
            let csv = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            // ws is sorted by product; the smallest q below the threshold is separate
            let first = ws.iter().filter(|w| w.product < a.below).min_by(|x, y| x.q.cmp(&y.q));
            let text = format!(
                "sup quotient {} at k = {}, position {}; {}",
                sup.value,
                sup.k,
                sup.position,
                first.map_or(format!("no product below {}", a.below), |w| format!(
                    "smallest q with product below {}: {} ({:e})",
                    a.below, w.q, w.product
                ))
            );
            let summary = json!({
                "expansion": expansion_json(&e),
                "sup_quotient": sup.value.to_string(),
                "argmax_k": sup.k,
                "argmax_position": sup.position,
                "below": a.below,
                "first_below_q": first.map(|w| w.q.to_string()),
                "first_below_product": first.map(|w| w.product),
                "min_product": ws.first().map(|w| w.product),
                "argmin_q": ws.first().map(|w| w.q.to_string()),
            });
            Ok(Outcome::ok(csv, summary, text))
        }
        RealParam::Float(_) => Err(Error::InvalidInput("cf needs an exact u (rat:, sqrt: or quad:)".into())),
    }
}

fn orbit(a: &OrbitArgs) -> Result<Outcome> {
    let p = Prime::new(a.p)?;
    let u = parse_u(&a.u)?;
    let v = parse_v(&a.v, p)?;
    let cone = parse_cone(&a.cone)?;
    let mut grid = crate::lattice::ConeGrid::new(a.tmax, a.nmax);
    grid.t_step = a.tstep;
    grid.n_step = a.nstep;
    let search = SearchCap { max_steps: a.max_steps as usize };
    let x = LatticePoint::x_uv(u.clone(), v.clone());
    let profile = cone_orbit_profile(&x, &cone, grid, search)?;
    let mut csv = Vec::new();
    profile.write_csv(&mut csv)?;
    let failed = profile.cells.iter().filter(|c| !c.ok()).count();
    let uncertified = profile.cells.iter().filter(|c| c.ok() && !c.certified).count();
    let mut text = format!(
        "{} cells on {}; {} failed, {} uncertified; max height {}",
        profile.cells.len(),
        profile.cone,
        failed,
        uncertified,
        profile.argmax().map_or("n/a".into(), |c| format!("{:.6} at (t, n) = ({}, {})", c.height, c.t, c.n))
    );
    let mut summary = json!({
        "cells": profile.cells.len(),
        "failed": failed,
        "uncertified": uncertified,
        "max_height": profile.max_height(),
        "argmax": profile.argmax().map(|c| json!({ "t": c.t, "n": c.n })),
        "escape_curve": profile.escape_curve(),
    });
    if a.check {
        let delta = a.delta.ok_or_else(|| Error::InvalidInput("--check needs --delta".into()))?;
        let cap = CorrespondenceCap { grid, search };
        let verdict = match cone.name {
            ConeName::C => correspondence_check_g(&u, &v, delta, cap)?,
            ConeName::CPrime if v.is_zero() => correspondence_check_mt(&u, p, delta, cap)?,
            _ => return Err(Error::InvalidInput("--check on this cone needs v = 0".into())),
        };
        let check = match &verdict {
            Correspondence::Witness(w) => {
                text += &format!(
                    "\nwitness at (t, n) = ({}, {}): q = {}, q0 = {}, product {:e} {} delta^3 = {:e}",
                    w.point.t,
                    w.point.n,
                    w.q,
                    w.q0,
                    w.product,
                    if w.holds { "<" } else { ">=" },
                    w.bound
                );
                json!({
                    "t": w.point.t, "n": w.point.n, "norm": w.norm,
                    "q": w.q.to_string(), "q0": w.q0.to_string(),
                    "product": w.product, "bound": w.bound, "holds": w.holds,
                })
            }
            Correspondence::Inconclusive { min_norm } => {
                text += &format!("\ninconclusive: smallest norm {min_norm:e} >= delta = {delta}");
                json!({ "inconclusive": true, "min_norm": min_norm })
            }
        };
        summary["check"] = check;
    }
    let code = if failed > 0 {
        3
    } else if uncertified > 0 {
        4
    } else {
        0
    };
    Ok(Outcome { csv, summary, text, code })
}

fn exceptional(a: &ExceptionalArgs) -> Result<Outcome> {
    let p = Prime::new(a.p)?;
    let v = parse_v(&a.v, p)?;
    let grid = UGrid { lo: a.lo, hi: a.hi, n: a.n, exact: a.exact };
    let scan = if a.ladder { exceptional_scan_ladder } else { exceptional_scan };
    let res = scan(&v, a.delta, a.qmax, &grid, Q0Window::default())?;
    let mut csv = Vec::new();
    res.write_csv(&mut csv)?;
    let n = res.survivor_count();
    let text = format!("{n} of {} grid points survive delta = {} up to q = {}", res.rows.len(), a.delta, a.qmax);
    Ok(Outcome::ok(csv, json!({ "grid_points": res.rows.len(), "survivors": n }), text))
}

fn parse_set(s: &str) -> Result<PointSet1D> {
    let (kind, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("set literal {s:?} lacks a kind prefix")))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?}")));
    match kind {
        "cantor" => Ok(PointSet1D::cantor(body.trim().parse().map_err(|_| Error::Parse(format!("bad depth {body:?}")))?)),
        "point" => Ok(PointSet1D::new([num(body)?], "point")),
        "grid" => {
            let parts: Vec<&str> = body.split(',').collect();
            let [lo, hi, n] = parts[..] else {
                return Err(Error::Parse(format!("grid literal needs lo,hi,n: {body:?}")));
            };
            let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad count {n:?}")))?;
            Ok(PointSet1D::grid(num(lo)?, num(hi)?, n))
        }
        other => Err(Error::Parse(format!("unknown set kind {other:?}"))),
    }
}

fn read_points(path: &std::path::Path) -> Result<PointSet1D> {
    let mut rd = csv::Reader::from_path(path)?;
    let headers = rd.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let ui = col("u").ok_or_else(|| Error::Parse(format!("{}: no `u` column", path.display())))?;
    let si = col("survives");
    let mut pts = Vec::new();
    for row in rd.records() {
        let row = row?;
        if si.is_some_and(|i| &row[i] != "true") {
            continue;
        }
        pts.push(row[ui].parse::<f64>().map_err(|_| Error::Parse(format!("bad u value {:?}", &row[ui])))?);
    }
    Ok(PointSet1D::new(pts, path.display().to_string()))
}

fn boxdim(a: &BoxdimArgs) -> Result<Outcome> {
    let set = match (&a.from, &a.set) {
        (Some(path), _) => read_points(path)?,
        (None, Some(s)) => parse_set(s)?,
        (None, None) => return Err(Error::InvalidInput("boxdim needs --from or --set".into())),
    };
    let ladder = parse_ladder(&a.ladder)?;
    let fit = box_dim_estimate(&set, &ladder)?;
    let mut csv = Vec::new();
    fit.write_csv(&mut csv)?;
    let text = format!("{} points; slope {:.6}, r^2 {:.6}", set.len(), fit.slope, fit.r_squared);
    let summary = json!({
        "points": set.len(),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "residuals": fit.residuals,
    });
    Ok(Outcome::ok(csv, summary, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig { schema: SCHEMA, command, precision: PrecisionMode::default(), threads: None, seed: 0, output: Default::default() }
    }

    fn rows(o: &Outcome) -> Vec<Vec<String>> {
        let mut rd = csv::Reader::from_reader(&o.csv[..]);
        rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
    }

    #[test]
    fn mt_rational_hits_zero() {
        let o = execute(&cfg(Command::MtScan(MtScanArgs { u: "rat:7/5".into(), p: 3, qmax: 100, stop_below: None }))).unwrap();
        assert_eq!(o.summary["min_value"], json!(0.0));
        assert_eq!(o.summary["argmin_q"], json!(5));
        let last = rows(&o).pop().unwrap();
        assert_eq!(last[0], "5");
    }

    #[test]
    fn headline_matches_csv() {
        let o = execute(&cfg(Command::MtScan(MtScanArgs { u: "sqrt:2".into(), p: 2, qmax: 5000, stop_below: None }))).unwrap();
        let last = rows(&o).pop().unwrap();
        assert_eq!(last[2].parse::<f64>().unwrap(), o.summary["min_value"].as_f64().unwrap());
    }

    #[test]
    fn bad_literal_is_usage_error() {
        let e = execute(&cfg(Command::MtScan(MtScanArgs { u: "sqrt:9".into(), p: 2, qmax: 10, stop_below: None }))).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn cf_sqrt2() {
        let o = execute(&cfg(Command::Cf(CfArgs { u: "sqrt:2".into(), p: 2, kmax: 4, len: 20, below: 0.2 }))).unwrap();
        assert_eq!(o.summary["expansion"]["period"], json!(["2"]));
        assert!(!rows(&o).is_empty());
    }

    #[test]
    fn random_furstenberg_is_seeded() {
        let c = |seed| {
            let mut c = cfg(Command::Furstenberg(FurstenbergArgs {
                u: None,
                random: Some(3),
                p1: 2,
                p2: 3,
                qmax: 10_000,
                stop_below: Some(0.05),
            }));
            c.seed = seed;
            execute(&c).unwrap().csv
        };
        assert_eq!(c(7), c(7));
        assert_ne!(c(7), c(8));
    }

    #[test]
    fn boxdim_from_exceptional_csv() {
        let ex = execute(&cfg(Command::Exceptional(ExceptionalArgs {
            v: "0".into(),
            p: 2,
            delta: 0.4,
            qmax: 1,
            lo: 0.0,
            hi: 1.0,
            n: 101,
            exact: false,
            ladder: false,
        })))
        .unwrap();
        assert_eq!(ex.summary["survivors"], json!(101));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(&path, &ex.csv).unwrap();
        let o = execute(&cfg(Command::Boxdim(BoxdimArgs { from: Some(path), set: None, ladder: "geo:2^-1..2^-5".into() }))).unwrap();
        assert_eq!(o.summary["points"], json!(101));
    }

    #[test]
    fn set_literals() {
        assert_eq!(parse_set("point:0.5").unwrap().len(), 1);
        assert_eq!(parse_set("grid:0,1,11").unwrap().len(), 11);
        assert_eq!(parse_set("cantor:3").unwrap().len(), 9);
        assert!(parse_set("blob:1").is_err());
    }

    #[test]
    fn orbit_check_prints_witness() {
        let o = execute(&cfg(Command::Orbit(OrbitArgs {
            u: "rat:3/7".into(),
            v: "0".into(),
            p: 2,
            cone: "C".into(),
            tmax: 10.0,
            nmax: 4,
            tstep: 0.5,
            nstep: 1,
            max_steps: 10_000,
            check: true,
            delta: Some(0.9),
        })))
        .unwrap();
        assert_eq!(o.code, 0);
        assert_eq!(o.summary["check"]["holds"], json!(true));
        assert!(o.text.contains("witness"));
    }
}
