use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sqfree_core::certificate::{int_text, Certificate};
use sqfree_core::construct::{
    self, coset_text, crt_solve, hard_family, integerize, moduli_product, verify_hard_instance, CongruenceSystem,
    HardInstanceRefutation, HardInstanceReport, HardInstanceVerdict,
};
use sqfree_core::fp::{self, FamilyVerdict, FpPoly};
use sqfree_core::gf2::{self, Gf2Poly, Lemma52Config, ShardReport};
use sqfree_core::neighborhood::{self, Thm14Outcome};
use sqfree_core::text::{format_poly, parse_int};
use sqfree_core::{totient, zpoly, Error, IntPoly};

use crate::checkpoint::{self, Checkpoint};
use crate::report::{Outcome, Status};
use crate::*;

/// Square-free certificates are attached only up to this degree; rechecking
/// them costs a resultant.
const SQUAREFREE_CERT_DEGREE: usize = 200;

pub(crate) fn dispatch(cmd: &Command) -> Result<(String, Value, Outcome)> {
    fn echo(name: &str, args: &impl Serialize) -> Result<(String, Value)> {
        Ok((name.to_string(), serde_json::to_value(args)?))
    }
    let ((name, input), out) = match cmd {
        Command::Squarefree(SquarefreeCmd::Check(a)) => (echo("squarefree check", a)?, check(a)?),
        Command::Search(a) => (echo("search", a)?, search(a)?),
        Command::Tail(a) => (echo("tail", a)?, tail(a)?),
        Command::Construct(ConstructCmd::Turan15(a)) => (echo("construct turan15", a)?, turan15_cmd(a)?),
        Command::Construct(ConstructCmd::Referee15) => (echo("construct referee15", &json!({}))?, referee15()?),
        Command::Construct(ConstructCmd::Family(a)) => (echo("construct family", a)?, family(a)?),
        Command::Census(CensusCmd::Phi(a)) => (echo("census phi", a)?, census_phi(a)?),
        Command::Verify(VerifyCmd::Lemma52(a)) => (echo("verify lemma52", a)?, lemma52(a)?),
        Command::Verify(VerifyCmd::Theorem61(a)) => (echo("verify theorem61", a)?, theorem61(a)?),
        Command::Scan(ScanCmd::Question62(a)) => (echo("scan question62", a)?, question62(a)?),
        Command::Recheck(a) => (echo("recheck", a)?, recheck(a)?),
    };
    Ok((name, input, out))
}

fn parse_z(s: &str) -> Result<IntPoly> {
    let f = parse_int(s).with_context(|| format!("polynomial {s:?}"))?;
    if f.is_zero() {
        bail!("the zero polynomial is not accepted");
    }
    Ok(f)
}

fn squarefree_cert(g: &IntPoly) -> Result<Vec<Certificate>> {
    if g.deg() > SQUAREFREE_CERT_DEGREE {
        return Ok(Vec::new());
    }
    Ok(vec![Certificate::for_int(g)?])
}

fn check(a: &CheckArgs) -> Result<Outcome> {
    let cert = match a.modulus {
        None => Certificate::for_int(&parse_z(&a.poly)?)?,
        Some(2) => Certificate::for_gf2(&Gf2Poly::parse_any(&a.poly)?)?,
        Some(p) => Certificate::for_fp(&FpPoly::parse(p, &a.poly)?)?,
    };
    if cert.poly() == "0" || cert.poly() == "0x0" {
        bail!("the zero polynomial is not accepted");
    }
    let (squarefree, witness) = match &cert {
        Certificate::Squarefree { .. } => (true, None),
        Certificate::SquareDivisor { witness, .. } => (false, Some(witness.clone())),
    };
    let status = if squarefree { Status::Ok } else { Status::Refuted };
    let result = json!({
        "ring": cert.ring(),
        "poly": cert.poly(),
        "squarefree": squarefree,
        "witness": cert.witness_square()?,
        "witness_root": witness,
    });
    Ok(Outcome::new(status, result)?.with_certificates(vec![cert]))
}

fn search(a: &SearchArgs) -> Result<Outcome> {
    let f = parse_z(&a.poly)?;
    let cap = a.degree_cap.unwrap_or(f.deg());
    let rep = neighborhood::nearest_squarefree(&f, a.budget, cap, a.allow_large)?;
    match &rep.found {
        Some(found) => {
            let certs = squarefree_cert(&found.g)?;
            Ok(Outcome::new(Status::Ok, &rep)?.with_certificates(certs))
        }
        None => {
            // every neighbour gets its square divisor
            let ball = neighborhood::enumerate_neighbors(&f, a.budget, cap, a.allow_large)?;
            let certs = ball
                .par_iter()
                .map(Certificate::for_int)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Outcome::new(Status::Refuted, &rep)?.with_certificates(certs))
        }
    }
}

fn tail_base(f: &IntPoly) -> IntPoly {
    if f.trailing_power() >= 2 {
        f.with_term(BigInt::one(), 0)
    } else {
        f.clone()
    }
}

fn tail(a: &TailArgs) -> Result<Outcome> {
    let f = parse_z(&a.poly)?;
    if let Some(n) = a.n {
        let g = neighborhood::thm13_construct(&f, n)?;
        let certs = squarefree_cert(&g)?;
        let result = json!({ "mode": "fixed", "n": n, "g": format_poly(&g), "verified": zpoly::is_squarefree_z(&g)? });
        return Ok(Outcome::new(Status::Ok, result)?.with_certificates(certs));
    }
    if a.window {
        return match neighborhood::thm14_construct(&f) {
            Ok(out) => {
                let g = match &out {
                    Thm14Outcome::Window { g, .. } | Thm14Outcome::LengthTwo { g } => g.clone(),
                };
                let certs = squarefree_cert(&g)?;
                let result = json!({ "mode": "window", "outcome": out, "verified": zpoly::is_squarefree_z(&g)? });
                Ok(Outcome::new(Status::Ok, result)?.with_certificates(certs))
            }
            Err(Error::TailExhausted(last)) => {
                Outcome::new(Status::Refuted, json!({ "mode": "window", "exhausted_at": last }))
            }
            Err(e) => Err(e.into()),
        };
    }
    match neighborhood::minimal_tail_exponent(&f, a.cap) {
        Ok(n) => {
            let g = tail_base(&f).with_term(BigInt::one(), n);
            let certs = squarefree_cert(&g)?;
            let result = json!({ "mode": "minimal", "n": n, "g": format_poly(&g), "verified": zpoly::is_squarefree_z(&g)? });
            Ok(Outcome::new(Status::Ok, result)?.with_certificates(certs))
        }
        Err(Error::TailExhausted(cap)) => {
            let base = tail_base(&f);
            let certs = (1..=cap)
                .into_par_iter()
                .map(|n| Certificate::for_int(&base.with_term(BigInt::one(), n)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Outcome::new(Status::Refuted, json!({ "mode": "minimal", "exhausted_at": cap }))?
                .with_certificates(certs))
        }
        Err(e) => Err(e.into()),
    }
}

fn blocker_certs(rep: &HardInstanceReport) -> Vec<Certificate> {
    rep.blockers
        .iter()
        .map(|b| Certificate::square_divisor_z(&(&rep.f + &b.perturbation), &b.witness))
        .collect()
}

/// Verdict of [`verify_hard_instance`] as a status, result payload and certificates.
fn hard_verdict(f: &IntPoly, k_cap: usize) -> Result<(Status, Value, Vec<Certificate>)> {
    Ok(match verify_hard_instance(f, k_cap)? {
        HardInstanceVerdict::Verified(rep) => {
            let certs = blocker_certs(&rep);
            (Status::Ok, json!({ "verdict": "verified", "blockers": rep.blockers }), certs)
        }
        HardInstanceVerdict::Refuted(r) => {
            let certs = match &r {
                HardInstanceRefutation::SquarefreeNeighbor { neighbor, .. } => squarefree_cert(neighbor)?,
                HardInstanceRefutation::NoDoubleRootAtZero => vec![],
            };
            (Status::Refuted, json!({ "verdict": "refuted", "refutation": r }), certs)
        }
    })
}

/// Lift the blockers of a verified instance to the top level of the result.
fn with_blockers(mut result: Value) -> Value {
    let blockers = result["hard_instance"]["blockers"].clone();
    result["blockers"] = if blockers.is_null() { json!([]) } else { blockers };
    result
}

fn system_text(sys: &CongruenceSystem) -> Vec<Value> {
    sys.entries()
        .iter()
        .map(|(r, m)| json!({ "residue": format_poly(r), "modulus": format_poly(m) }))
        .collect()
}

fn turan15_cmd(a: &Turan15Args) -> Result<Outcome> {
    let base = if a.referee { Base::Referee15 } else { Base::Turan15 };
    match a.degree {
        Some(d) => family(&FamilyArgs { d, k: a.k.unwrap_or(1), base }),
        None if a.referee => referee15(),
        None => turan15(),
    }
}

fn turan15() -> Result<Outcome> {
    let sys = CongruenceSystem::turan15();
    let f0 = crt_solve(&sys)?;
    let h = moduli_product(&sys);
    let int = integerize(&f0, &h, 5)?;
    let f = int.witness;
    let matches_printed = f == construct::turan15();
    let (status, verdict, certs) = hard_verdict(&f, f.deg())?;
    let status = if matches_printed { status } else { Status::Refuted };
    let result = json!({
        "system": system_text(&sys),
        "f0": format_poly(&f0),
        "h": format_poly(&h),
        "cosets": int.cosets.iter().map(coset_text).collect::<Vec<_>>(),
        "f": format_poly(&f),
        "matches_printed": matches_printed,
        "hard_instance": verdict,
    });
    let result = with_blockers(result);
    Ok(Outcome::new(status, result)?.with_certificates(certs))
}

fn referee15() -> Result<Outcome> {
    let sys = CongruenceSystem::referee15();
    let bases: Vec<IntPoly> = sys.entries().iter().skip(1).map(|(_, m)| zpoly::primitive_part(m)).collect();
    let resultant_one = construct::validate_resultant_one_list(&construct::referee_bases(1)).is_ok();
    let f = zpoly::to_int(&crt_solve(&sys)?).context("solution is not integral")?;
    let matches_printed = f == construct::referee15();
    let (status, verdict, certs) = hard_verdict(&f, f.deg())?;
    let status = if matches_printed && resultant_one { status } else { Status::Refuted };
    let result = json!({
        "system": system_text(&sys),
        "bases_resultant_one": resultant_one,
        "squared_bases": bases.iter().map(int_text).collect::<Vec<_>>(),
        "f": format_poly(&f),
        "matches_printed": matches_printed,
        "hard_instance": verdict,
    });
    let result = with_blockers(result);
    Ok(Outcome::new(status, result)?.with_certificates(certs))
}

fn family(a: &FamilyArgs) -> Result<Outcome> {
    let (base, mult) = match a.base {
        Base::Turan15 => (construct::turan15(), construct::turan15_multiplier()),
        Base::Referee15 => (construct::referee15(), construct::referee15_multiplier()),
    };
    let f = hard_family(a.d, a.k, &base, &mult)?;
    let (status, verdict, certs) = hard_verdict(&f, f.deg())?;
    let result = with_blockers(json!({ "f": format_poly(&f), "hard_instance": verdict }));
    Ok(Outcome::new(status, result)?.with_certificates(certs))
}

fn census_phi(a: &PhiArgs) -> Result<Outcome> {
    let threshold: BigRational = a
        .threshold
        .parse()
        .map_err(|_| anyhow::anyhow!("threshold {:?} is not a rational number", a.threshold))?;
    if a.min == 0 || a.min > a.max {
        bail!("need 1 <= min <= max");
    }
    match totient::census(a.min, a.max, &threshold) {
        Ok(rows) => {
            if let Some(path) = &a.csv {
                let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
                w.write_record(["r", "phi_count", "ratio"])?;
                for row in &rows {
                    w.write_record([row.r.to_string(), row.phi_count.to_string(), coset_text(&row.ratio)])?;
                }
                w.flush()?;
            }
            let max_r = rows.iter().map(|r| r.r).max();
            let result = json!({ "bound_holds": true, "count": rows.len(), "max_r": max_r, "rows": rows });
            Outcome::new(Status::Ok, result)
        }
        Err(Error::PhiBoundViolated(r)) => {
            Outcome::new(Status::Refuted, json!({ "bound_holds": false, "violation_at": r }))
        }
        Err(e) => Err(e.into()),
    }
}

fn lemma52(a: &Lemma52Args) -> Result<Outcome> {
    let cfg = Lemma52Config { max_degree: a.max_degree, corollary: a.corollary, shard_bits: a.shard_bits };
    // validate before touching the checkpoint file
    gf2::lemma52_shards(&cfg)?;
    let header = format!(
        "lemma52 max_degree={} corollary={} shard_bits={}",
        cfg.max_degree, cfg.corollary, cfg.shard_bits
    );
    let (writer, done) = match &a.checkpoint {
        Some(path) => {
            let (w, done) = Checkpoint::open(path, &header)?;
            (Some(w), done)
        }
        None => (None, BTreeSet::new()),
    };
    let write_error = std::sync::Mutex::new(None);
    let on_done = |r: &ShardReport| {
        if let Some(w) = &writer {
            let status = if r.failures.is_empty() { checkpoint::Status::Done } else { checkpoint::Status::Failed };
            if let Err(e) = w.record(r.index, status, r.failures.len() as u64) {
                write_error.lock().unwrap().get_or_insert(e);
            }
        }
    };
    let rep = gf2::lemma52_run(&cfg, &done, &on_done)?;
    if let Some(e) = write_error.into_inner().unwrap() {
        return Err(e);
    }
    if rep.passed() {
        return Outcome::new(Status::Ok, &rep);
    }
    let lo = if cfg.corollary { 2 } else { 1 };
    let mut certs = Vec::new();
    for f in &rep.failures {
        certs.push(Certificate::for_gf2(f)?);
        for n in lo..f.deg() {
            certs.push(Certificate::for_gf2(&f.flipped(n))?);
        }
    }
    Ok(Outcome::new(Status::Refuted, &rep)?.with_certificates(certs))
}

fn theorem61(a: &FieldArgs) -> Result<Outcome> {
    let rep = fp::family_count_check(a.p, a.d)?;
    if rep.passed() {
        let certs = rep
            .sample_blockers
            .iter()
            .map(|b| Certificate::square_divisor_p(&rep.sample.add(&b.perturbation), &b.witness))
            .collect();
        return Ok(Outcome::new(Status::Ok, &rep)?.with_certificates(certs));
    }
    let certs = match &rep.failure {
        Some((_, FamilyVerdict::SquarefreeNeighbor { neighbor, .. })) => vec![Certificate::for_fp(neighbor)?],
        _ => vec![],
    };
    Ok(Outcome::new(Status::Refuted, &rep)?.with_certificates(certs))
}

fn question62(a: &FieldArgs) -> Result<Outcome> {
    let rep = fp::question62_scan(a.p, a.d)?;
    let certs = vec![Certificate::for_fp(&rep.witness_neighbor)?];
    Ok(Outcome::new(Status::Ok, &rep)?.with_certificates(certs))
}

fn recheck(a: &RecheckArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let value: Value = serde_json::from_str(&text).context("input is not JSON")?;
    let certs: Vec<Certificate> = if let Some(list) = value.get("certificates") {
        serde_json::from_value(list.clone()).context("bad certificate list in report")?
    } else if value.is_array() {
        serde_json::from_value(value).context("bad certificate list")?
    } else {
        vec![serde_json::from_value(value).context("not a report or certificate")?]
    };
    let verdicts = certs
        .par_iter()
        .map(|c| c.recheck())
        .collect::<std::result::Result<Vec<bool>, _>>()?;
    let failed: Vec<usize> = verdicts.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();
    let status = if failed.is_empty() { Status::Ok } else { Status::Refuted };
    Outcome::new(status, json!({ "checked": certs.len(), "failed": failed }))
}
