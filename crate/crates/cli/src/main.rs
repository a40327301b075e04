//! `prym`: prototypes, Butterfly graphs, cusp tables and flat-surface
//! checks from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input or a
//! computation error.

mod cache;

use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use prym_core::butterfly::MoveLabel;
use prym_core::components::{
    build_graph, classify, is_classified, map_exec, ClassificationReport, Exec, SetKind, Sets,
};
use prym_core::cusps::{emit_table1, TableFormat};
use prym_core::exactnum::exact_sqrt;
use prym_core::geometry::{
    build_surface, decompose, geometric_butterfly, identify_prototype, parse_direction, to_origami, SurfaceModel,
};
use prym_core::prototypes::{
    enumerate, enumerate_complete, enumerate_genus2, enumerate_reduced, enumerate_square_cusp, CompletePrototype,
    Model, Prototype,
};
use prym_core::verify::{run_suite, Suite};

use cache::Cache;

#[derive(Parser)]
#[command(name = "prym", version, about = "Prototypes and Butterfly moves for Prym eigenforms")]
struct Cli {
    /// Worker threads for sweeps; 1 runs sequentially, 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the prototypes of one discriminant.
    Enumerate {
        #[arg(long)]
        disc: i64,
        #[arg(long, default_value_t = 3)]
        genus: u8,
        /// P (model A), Pp (model B), Q (model A with signs), S (reduced),
        /// Ps (one- and two-cylinder cusps, square D) or G2 (genus 2).
        #[arg(long, default_value = "P")]
        set: String,
        #[arg(long)]
        json: bool,
    },
    /// Component counts of the Butterfly graphs next to the predicted counts.
    Components(ComponentsArgs),
    /// One Butterfly graph, as JSON or Graphviz.
    Graph {
        #[arg(long)]
        disc: i64,
        #[arg(long, default_value_t = 3)]
        genus: u8,
        /// P, Q or S.
        #[arg(long, default_value = "P")]
        set: String,
        /// Write Graphviz to this file (`-` for stdout) instead of JSON.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cusp counts of the Weierstrass curves.
    Cusps {
        #[arg(long, default_value = "5..52")]
        disc_range: String,
        /// csv, md or json.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Recompute the classification statements; exits 1 if a check fails.
    Verify {
        /// table1, sd, pd, qd, chains, geometry, genus4, properties or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        json: bool,
    },
    /// Flat-surface computations on the polygon models.
    #[command(subcommand)]
    Geometry(GeometryCmd),
    /// Square tiling of a complete prototype with square discriminant.
    Origami {
        /// Checked against the prototype when given.
        #[arg(long)]
        disc: Option<i64>,
        /// `w,h,t,e,eps` with eps `+` or `-`.
        #[arg(long, allow_hyphen_values = true)]
        proto: String,
        /// Print the size of the L, R orbit.
        #[arg(long)]
        orbit: bool,
    },
}

#[derive(Args)]
struct ComponentsArgs {
    /// A single discriminant.
    #[arg(long, conflicts_with = "disc_range")]
    disc: Option<i64>,
    /// `A..B`, inclusive; discriminants outside the classified range are skipped.
    #[arg(long)]
    disc_range: Option<String>,
    #[arg(long, default_value_t = 3)]
    genus: u8,
    /// Letters from P, Q, S; Q also computes P for the parity check.
    #[arg(long, default_value = "PQS")]
    set: String,
    #[arg(long)]
    json: bool,
    /// Cache directory; $PRYM_CACHE_DIR takes precedence. No cache when neither is set.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// Cylinder decomposition of a model surface in a direction.
    Decompose {
        /// Checked against the prototype when given.
        #[arg(long)]
        disc: Option<i64>,
        /// Aplus, Aminus, B or G4A. Defaults to B, or to A± from the sign in --proto.
        #[arg(long)]
        model: Option<String>,
        /// `w,h,t,e` or `w,h,t,e,eps`.
        #[arg(long, allow_hyphen_values = true)]
        proto: String,
        /// `x : y`, each side a sum of terms in w, h, t, L (λ) and rationals.
        #[arg(long, alias = "direction", allow_hyphen_values = true)]
        dir: String,
        #[arg(long)]
        json: bool,
    },
    /// A Butterfly move carried out on the surface.
    Move {
        /// `w,h,t,e,eps`.
        #[arg(long, allow_hyphen_values = true)]
        proto: String,
        /// B1, B2, …, Binf.
        #[arg(long = "move")]
        label: String,
    },
}

/// Input or computation error: exit code 2.
struct Usage(anyhow::Error);

fn parse_range(s: &str) -> Result<RangeInclusive<i64>> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| anyhow!("range {s:?} should look like A..B"))?;
    let a: i64 = a.trim().parse().with_context(|| format!("range start {a:?}"))?;
    let b: i64 = b.trim().parse().with_context(|| format!("range end {b:?}"))?;
    if a > b {
        bail!("empty range {s:?}");
    }
    Ok(a..=b)
}

/// `w,h,t,e` with an optional trailing sign.
fn parse_literal(s: &str) -> Result<([i64; 4], Option<i8>)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        bail!("prototype {s:?} should be w,h,t,e or w,h,t,e,eps");
    }
    let mut v = [0i64; 4];
    for (x, p) in v.iter_mut().zip(&parts) {
        *x = p
            .parse()
            .with_context(|| format!("prototype {s:?}: {p:?} is not an integer"))?;
    }
    let eps = match parts.get(4) {
        None => None,
        Some(&("+" | "1" | "+1")) => Some(1),
        Some(&("-" | "-1")) => Some(-1),
        Some(x) => bail!("prototype {s:?}: sign {x:?} should be + or -"),
    };
    Ok((v, eps))
}

fn parse_sets(s: &str) -> Result<Sets> {
    let mut sets = Sets {
        p: false,
        q: false,
        s: false,
    };
    for c in s.chars().filter(|c| *c != ',') {
        match c.to_ascii_uppercase() {
            'P' => sets.p = true,
            'Q' => sets.q = true,
            'S' => sets.s = true,
            _ => bail!("unknown set {c:?} in {s:?}, expected letters from P, Q, S"),
        }
    }
    if !(sets.p || sets.q || sets.s) {
        bail!("no set selected");
    }
    // the Q count is cross-checked against a parity count on P
    sets.p |= sets.q;
    Ok(sets)
}

fn check_disc(given: Option<i64>, p: &Prototype) -> Result<()> {
    match given {
        Some(d) if d != p.disc => bail!("{p} has discriminant {}, not {d}", p.disc),
        _ => Ok(()),
    }
}

fn complete(lit: &str) -> Result<CompletePrototype> {
    let ([w, h, t, e], eps) = parse_literal(lit)?;
    let eps = eps.ok_or_else(|| anyhow!("prototype {lit:?} needs a sign: w,h,t,e,+ or w,h,t,e,-"))?;
    Ok(CompletePrototype::new(Prototype::a3(w, h, t, e)?, eps)?)
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(|| "-".into(), |n| n.to_string())
}

fn components_text(reports: &[ClassificationReport]) -> String {
    let mut s = String::from("D\tgenus\tP\tpred\tQ\tpred\tS\tpred\tflags\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.disc,
            r.genus,
            opt(r.comp_p),
            opt(r.predicted_p),
            opt(r.comp_q),
            opt(r.predicted_q),
            opt(r.comp_s),
            opt(r.predicted_s),
            if r.flags.is_empty() {
                "ok".to_string()
            } else {
                r.flags.join("; ")
            }
        );
    }
    s
}

fn components(a: &ComponentsArgs, exec: Exec) -> Result<(String, bool)> {
    let sets = parse_sets(&a.set)?;
    if a.genus != 3 && a.genus != 4 {
        bail!("components are computed in genus 3 and 4, not {}", a.genus);
    }
    let discs: Vec<i64> = match (&a.disc, &a.disc_range) {
        (Some(d), _) => vec![*d],
        (None, Some(r)) => parse_range(r)?.filter(|&d| is_classified(d, a.genus)).collect(),
        (None, None) => bail!("give --disc or --disc-range"),
    };
    let dir = std::env::var_os("PRYM_CACHE_DIR")
        .map(PathBuf::from)
        .or_else(|| a.cache_dir.clone());
    let cache = dir.as_deref().map(Cache::open).transpose()?;
    let reports = map_exec(&discs, exec, |&d| -> Result<ClassificationReport> {
        if let Some(r) = cache.as_ref().and_then(|c| c.get(d, a.genus, sets)) {
            return Ok(r);
        }
        let r = classify(d, a.genus, sets)?;
        if let Some(c) = &cache {
            c.put(&r, sets)?;
        }
        Ok(r)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.agrees());
    let out = if a.json {
        serde_json::to_string_pretty(&reports)? + "\n"
    } else {
        components_text(&reports)
    };
    Ok((out, ok))
}

fn listing<T: std::fmt::Display + serde::Serialize>(items: Vec<T>, json: bool) -> Result<String> {
    if json {
        Ok(serde_json::to_string_pretty(&items)? + "\n")
    } else {
        Ok(items.iter().map(|x| format!("{x}\n")).collect())
    }
}

fn enumerate_cmd(disc: i64, genus: u8, set: &str, json: bool) -> Result<String> {
    let needs = |g: &[u8]| -> Result<()> {
        if g.contains(&genus) {
            Ok(())
        } else {
            bail!("set {set} is defined in genus {g:?}, not {genus}")
        }
    };
    match set {
        "P" | "Pp" => {
            needs(&[3, 4])?;
            let model = if set == "P" { Model::A } else { Model::B };
            listing(enumerate(disc, genus, model), json)
        }
        "Q" => {
            needs(&[3])?;
            listing(enumerate_complete(disc), json)
        }
        "S" => {
            needs(&[3, 4])?;
            if json {
                listing(enumerate_reduced(disc, genus).iter().map(|r| r.e).collect(), true)
            } else {
                Ok(enumerate_reduced(disc, genus)
                    .iter()
                    .map(|r| format!("[{}]\n", r.e))
                    .collect())
            }
        }
        "Ps" => {
            needs(&[3])?;
            let d = exact_sqrt(disc).ok_or_else(|| anyhow!("set Ps needs a square discriminant, {disc} is not"))?;
            let v = enumerate_square_cusp(d);
            if json {
                Ok(serde_json::to_string_pretty(&v)? + "\n")
            } else {
                Ok(v.iter().map(|c| format!("(p={},q={})\n", c.p, c.q)).collect())
            }
        }
        "G2" => {
            needs(&[2])?;
            let v = enumerate_genus2(disc);
            if json {
                Ok(serde_json::to_string_pretty(&v)? + "\n")
            } else {
                Ok(v.iter()
                    .map(|g| format!("({},{},{},{})\n", g.a, g.b, g.c, g.e))
                    .collect())
            }
        }
        _ => bail!("unknown set {set:?}, expected P, Pp, Q, S, Ps or G2"),
    }
}

fn verify_cmd(suite: &str, json: bool, exec: Exec) -> Result<(String, bool)> {
    let suites = if suite == "all" {
        vec![
            Suite::Table1,
            Suite::Sd,
            Suite::Pd,
            Suite::Qd,
            Suite::Chains,
            Suite::Geometry,
            Suite::Genus4,
            Suite::Properties,
        ]
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(run_suite(s, exec)?);
    }
    let ok = checks.iter().all(|c| c.pass);
    let out = if json {
        serde_json::to_string_pretty(&checks)? + "\n"
    } else {
        checks.iter().map(|c| format!("{c}\n")).collect()
    };
    Ok((out, ok))
}

fn geometry_cmd(g: &GeometryCmd) -> Result<String> {
    match g {
        GeometryCmd::Decompose {
            disc,
            model,
            proto,
            dir,
            json,
        } => {
            let ([w, h, t, e], eps) = parse_literal(proto)?;
            let model: SurfaceModel = match (model, eps) {
                (Some(m), _) => m.parse()?,
                (None, Some(1)) => SurfaceModel::APlus,
                (None, Some(_)) => SurfaceModel::AMinus,
                (None, None) => SurfaceModel::B,
            };
            if let (Some(want), Some(got)) = (model.eps(), eps) {
                if want != got {
                    bail!("model {model} does not match the sign in {proto:?}");
                }
            }
            let (genus, m) = match model {
                SurfaceModel::B => (3, Model::B),
                SurfaceModel::G4A => (4, Model::A),
                _ => (3, Model::A),
            };
            let p = Prototype::new(w, h, t, e, genus, m)?;
            check_disc(*disc, &p)?;
            let v = parse_direction(dir, &p)?;
            let s = build_surface(&p, model)?;
            let dec = decompose(&s, &v)?;
            let id = identify_prototype(&dec);
            if *json {
                let out = serde_json::json!({
                    "decomposition": dec,
                    "identified": id.as_ref().ok(),
                    "identify_error": id.as_ref().err().map(|e| e.to_string()),
                });
                return Ok(serde_json::to_string_pretty(&out)? + "\n");
            }
            let mut s = format!("direction {}\nmodel {}\n", dec.direction, dec.model);
            for (i, c) in dec.cylinders.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "cylinder {i}: width {} height {} twist {} {:?}",
                    c.width, c.height, c.twist, c.orbit
                );
            }
            let _ = match id {
                Ok(x) => writeln!(s, "prototype {x}"),
                Err(e) => writeln!(s, "not identified: {e}"),
            };
            Ok(s)
        }
        GeometryCmd::Move { proto, label } => {
            let cp = complete(proto)?;
            let q: MoveLabel = label.parse()?;
            Ok(format!("{}\n", geometric_butterfly(&cp, q)?))
        }
    }
}

fn origami_cmd(disc: Option<i64>, proto: &str, orbit: bool) -> Result<String> {
    let cp = complete(proto)?;
    check_disc(disc, &cp.proto)?;
    let o = to_origami(&cp)?;
    let mut s = format!("{} squares\n{o}\n", o.n());
    if orbit {
        let _ = writeln!(s, "orbit size {}", o.orbit().len());
    }
    Ok(s)
}

fn graph_cmd(disc: i64, genus: u8, set: &str, dot: Option<&PathBuf>) -> Result<String> {
    let set: SetKind = set.parse()?;
    let g = build_graph(disc, genus, set)?;
    match dot {
        None => Ok(serde_json::to_string_pretty(&g)? + "\n"),
        Some(p) if p.as_os_str() == "-" => Ok(g.to_dot()),
        Some(p) => {
            fs::write(p, g.to_dot()).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
    }
}

fn executor(jobs: usize) -> Result<Exec> {
    if jobs == 1 {
        return Ok(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    Ok(Exec::default())
}

fn run(cli: &Cli) -> std::result::Result<(String, bool), Usage> {
    let done = |s: String| (s, true);
    let r = executor(cli.jobs).and_then(|exec| match &cli.cmd {
        Cmd::Enumerate { disc, genus, set, json } => enumerate_cmd(*disc, *genus, set, *json).map(done),
        Cmd::Components(a) => components(a, exec),
        Cmd::Graph { disc, genus, set, dot } => graph_cmd(*disc, *genus, set, dot.as_ref()).map(done),
        Cmd::Cusps { disc_range, format } => (|| {
            let f: TableFormat = format.parse()?;
            Ok(emit_table1(parse_range(disc_range)?, f)?)
        })()
        .map(done),
        Cmd::Verify { suite, json } => verify_cmd(suite, *json, exec),
        Cmd::Geometry(g) => geometry_cmd(g).map(done),
        Cmd::Origami { disc, proto, orbit } => origami_cmd(*disc, proto, *orbit).map(done),
    });
    r.map_err(Usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_range("17..2000").unwrap(), 17..=2000);
        assert_eq!(parse_range("5..=52").unwrap(), 5..=52);
        assert!(parse_range("9..5").is_err());
        assert_eq!(parse_literal("4,1,0,-3").unwrap(), ([4, 1, 0, -3], None));
        assert_eq!(parse_literal("12,1,0,-2,-").unwrap(), ([12, 1, 0, -2], Some(-1)));
        assert!(parse_literal("4,1,0").is_err());
        assert!(parse_literal("4,1,0,1,x").is_err());
        assert_eq!(cache::sets_key(parse_sets("Q").unwrap()), "PQ");
        assert_eq!(cache::sets_key(parse_sets("s,p").unwrap()), "PS");
        assert!(parse_sets("X").is_err());
    }

    #[test]
    fn commands() {
        let listed = enumerate_cmd(17, 3, "P", false).unwrap();
        assert_eq!(listed.lines().count(), enumerate(17, 3, Model::A).len());
        assert_eq!(enumerate_cmd(9, 3, "P", false).unwrap(), "");
        assert!(enumerate_cmd(17, 3, "Ps", false).is_err());
        assert_eq!(enumerate_cmd(5, 2, "G2", false).unwrap(), "(0,1,1,-1)\n");
        let dec = geometry_cmd(&GeometryCmd::Decompose {
            disc: Some(48),
            model: Some("B".into()),
            proto: "3,2,0,0".into(),
            dir: "w : -h - L/2".into(),
            json: false,
        })
        .unwrap();
        assert!(dec.ends_with("prototype (4,1,0,-4,-)\n"), "{dec}");
        let o = origami_cmd(Some(100), "12,1,0,-2,+", true).unwrap();
        assert!(o.starts_with("10 squares") && o.ends_with("orbit size 135\n"));
        assert!(origami_cmd(Some(99), "12,1,0,-2,+", false).is_err());
        let (out, ok) = verify_cmd("chains", false, Exec::Sequential).unwrap();
        assert!(!ok && out.starts_with("[FAIL]  5"));
    }
}
