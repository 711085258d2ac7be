//! Argument parsing and dispatch for the `sheafmonad` binary.

use std::io::Read;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use sheafmonad::autgroup::GroupElement;
use sheafmonad::hilbert::{bott_h, euler_poly, interpolate, line_bundle_hilb, IntPoly};
use sheafmonad::modp3::{self, ParamPoint};
use sheafmonad::monad::{beilinson_shape, dual_beilinson_table};
use sheafmonad::random;
use sheafmonad::scalar::Field;
use sheafmonad::{Error, Monad};

use crate::format::{self, ParseError};
use crate::table;

#[derive(Parser, Debug)]
#[command(name = "sheafmonad", version, about = "Free monads on projective space")]
struct Cli {
    /// Input file; `-` or absent reads standard input.
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<String>,
    /// Output file; absent writes standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for per-twist computations.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// h^q(P^n, Omega^p(t)).
    Bott {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
    },
    #[command(subcommand)]
    Hilb(HilbCmd),
    #[command(subcommand)]
    Monad(MonadCmd),
    #[command(subcommand)]
    Beilinson(BeilinsonCmd),
    #[command(subcommand)]
    Group(GroupCmd),
    #[command(subcommand)]
    P3(P3Cmd),
}

#[derive(Subcommand, Debug)]
enum HilbCmd {
    /// Hilbert polynomial of O(e) on P^n.
    Line {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
    },
    /// Polynomial through values at t0, t0+1, ...
    Interpolate {
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        t0: i64,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Args, Debug)]
struct WindowArg {
    /// Twist window `<lo>:<hi>`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Subcommand, Debug)]
enum MonadCmd {
    Validate,
    Dualize,
    /// Hilbert polynomial of the cohomology sheaf, checked against the Euler sum.
    Hilbert,
    /// Alternating sum of the terms' Hilbert polynomials.
    Euler,
    /// Hilbert function of the cohomology at a position.
    Hf {
        #[arg(long, allow_hyphen_values = true)]
        position: Option<i64>,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Vanishing of the cohomology on a twist window.
    Exactness {
        #[arg(long, allow_hyphen_values = true)]
        positions: Option<String>,
        #[command(flatten)]
        window: WindowArg,
    },
    Minimality,
}

#[derive(Subcommand, Debug)]
enum BeilinsonCmd {
    /// Terms of the Beilinson monad of a cohomology table.
    Shape,
    /// Table of F^D(1) from the table of F.
    Dualtable,
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Random element of the automorphism group of the monad's terms.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    /// Apply a group element to the monad.
    Act {
        #[arg(long, value_name = "FILE")]
        group: String,
    },
    /// The element of the dual group induced by a group element.
    Dual {
        #[arg(long, value_name = "FILE")]
        group: String,
        #[arg(long)]
        codim: usize,
    },
}

#[derive(Subcommand, Debug)]
enum P3Cmd {
    /// Seeded sample of a semistable point.
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "Fp:101")]
        field: String,
        #[arg(long, default_value_t = 20)]
        max_tries: usize,
    },
    /// Membership verdict with failed clauses.
    Check,
    /// The dual point as a monad file.
    Dualize,
    /// Sample, check, dualize and verify duality and equivariance.
    Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "Fp:101")]
        field: String,
    },
    /// The twisted cubic point.
    TwistedCubic {
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Parse(String),
    Domain(Error),
    Io(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Parse(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

fn parse_fail(msg: impl Into<String>) -> Failure {
    Failure::Parse(msg.into())
}

struct Ctx<'a> {
    input: Option<String>,
    json: bool,
    jobs: Option<usize>,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    fn read_input(&mut self) -> Result<String, Failure> {
        match self.input.as_deref() {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| Failure::Io(e.to_string()))?;
                Ok(s)
            }
            Some(path) => read_file(path),
        }
    }

    fn monad(&mut self) -> Result<Monad, Failure> {
        Ok(format::parse_monad(&self.read_input()?)?)
    }

    fn point(&mut self) -> Result<ParamPoint, Failure> {
        Ok(ParamPoint::from_monad(&self.monad()?)?)
    }

    /// Runs `f` on a pool of `--jobs` threads, or inline.
    fn pooled<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
        match self.jobs {
            Some(k) if k > 1 => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| Failure::Io(e.to_string()))?;
                Ok(pool.install(f))
            }
            _ => Ok(f()),
        }
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn parse_window(s: &str) -> Result<RangeInclusive<i64>, Failure> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| parse_fail(format!("window '{s}' must be <lo>:<hi>")))?;
    let lo: i64 = lo.trim().parse().map_err(|_| parse_fail(format!("bad window start '{lo}'")))?;
    let hi: i64 = hi.trim().parse().map_err(|_| parse_fail(format!("bad window end '{hi}'")))?;
    if lo > hi {
        return Err(parse_fail(format!("empty window {lo}:{hi}")));
    }
    Ok(lo..=hi)
}

fn parse_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| parse_fail(format!("bad integer '{}'", v.trim()))))
        .collect()
}

fn field_arg(s: &str) -> Result<Field, Failure> {
    format::parse_field(s).map_err(parse_fail)
}

pub fn poly_json(p: &IntPoly) -> Value {
    json!({ "poly": p.to_string(), "coefficients": p.coefficient_strings() })
}

fn hf_values(ctx: &Ctx, m: &Monad, pos: i64, ts: RangeInclusive<i64>) -> Result<Vec<usize>, Failure> {
    let ts: Vec<i64> = ts.collect();
    ctx.pooled(|| ts.par_iter().map(|&t| m.cohomology_dim_at(pos, t)).collect())
}

fn hilbert(ctx: &Ctx, m: &Monad) -> Result<IntPoly, Failure> {
    if ctx.jobs.is_some_and(|k| k > 1) {
        let mut failure = None;
        let r = m.hilbert_poly_of_cohomology_with(|m, pos, ts| match hf_values(ctx, m, pos, ts) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                Vec::new()
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        Ok(r?)
    } else {
        Ok(m.hilbert_poly_of_cohomology()?)
    }
}

/// Text written to `--out` / stdout on success.
enum Output {
    Text(String),
    Json(Value),
}

fn default_window(m: &Monad) -> RangeInclusive<i64> {
    m.hilbert_window(0)
}

fn execute(cmd: Cmd, ctx: &mut Ctx) -> Result<Output, Failure> {
    let json = ctx.json;
    let text_or = |text: String, value: Value| if json { Output::Json(value) } else { Output::Text(text + "\n") };
    Ok(match cmd {
        Cmd::Bott { n, p, q, t } => {
            let h = bott_h(n, p, q, t)?;
            text_or(h.to_string(), json!({ "n": n, "p": p, "q": q, "t": t, "h": h }))
        }
        Cmd::Hilb(HilbCmd::Line { n, e }) => {
            let p = line_bundle_hilb(n, e);
            text_or(p.to_string(), poly_json(&p))
        }
        Cmd::Hilb(HilbCmd::Interpolate { values, t0, bound }) => {
            let p = interpolate(&parse_list(&values)?, t0, bound)?;
            text_or(p.to_string(), poly_json(&p))
        }
        Cmd::Monad(mc) => {
            let m = ctx.monad()?;
            match mc {
                MonadCmd::Validate => {
                    let v = m.validate();
                    let text = if v.is_empty() {
                        "ok".to_string()
                    } else {
                        v.iter().map(|v| format!("violation {}: {v}", v.code())).collect::<Vec<_>>().join("\n")
                    };
                    let list: Vec<Value> = v
                        .iter()
                        .map(|v| {
                            let index = match v {
                                sheafmonad::Violation::NotComplex { index } => *index,
                                sheafmonad::Violation::Inhomogeneous { index, .. } => *index,
                            };
                            json!({ "code": v.code(), "index": index, "message": v.to_string() })
                        })
                        .collect();
                    text_or(text, json!({ "ok": v.is_empty(), "violations": list }))
                }
                MonadCmd::Dualize => Output::Text(format::print_monad(&m.dualize()?)),
                MonadCmd::Hilbert => {
                    let p = hilbert(ctx, &m)?;
                    text_or(p.to_string(), poly_json(&p))
                }
                MonadCmd::Euler => {
                    let p = euler_poly(&m);
                    text_or(p.to_string(), poly_json(&p))
                }
                MonadCmd::Hf { position, window } => {
                    let pos = position.unwrap_or(m.cohomology_at());
                    let ts = match window.window {
                        Some(w) => parse_window(&w)?,
                        None => default_window(&m),
                    };
                    let values = hf_values(ctx, &m, pos, ts.clone())?;
                    let text = ts.clone().zip(&values).map(|(t, v)| format!("{t}: {v}")).collect::<Vec<_>>().join("\n");
                    let list: Vec<Value> = ts.zip(&values).map(|(t, v)| json!({ "t": t, "dim": v })).collect();
                    text_or(text, json!({ "position": pos, "values": list }))
                }
                MonadCmd::Exactness { positions, window } => {
                    let positions = match positions {
                        Some(p) => parse_list(&p)?,
                        None => m.indices().filter(|&i| i != m.cohomology_at()).collect(),
                    };
                    let ts = match window.window {
                        Some(w) => parse_window(&w)?,
                        None => default_window(&m),
                    };
                    let flags: Vec<bool> = ctx.pooled(|| {
                        positions
                            .par_iter()
                            .map(|&p| m.exactness_check(&[p], ts.clone())[0])
                            .collect()
                    })?;
                    let text = positions.iter().zip(&flags).map(|(p, e)| format!("{p}: {e}")).collect::<Vec<_>>().join("\n");
                    let list: Vec<Value> =
                        positions.iter().zip(&flags).map(|(p, e)| json!({ "position": p, "exact": e })).collect();
                    text_or(text, json!({ "window": [ts.start(), ts.end()], "positions": list }))
                }
                MonadCmd::Minimality => {
                    let b = m.minimality_check();
                    text_or(b.to_string(), json!({ "minimal": b }))
                }
            }
        }
        Cmd::Beilinson(bc) => {
            let t = table::parse_table(&ctx.read_input()?)?;
            match bc {
                BeilinsonCmd::Shape => {
                    let shape = beilinson_shape(&t);
                    let text = shape
                        .iter()
                        .map(|(i, s)| format!("term {i}: {}", format::print_twists(s.twists())))
                        .collect::<Vec<_>>()
                        .join("\n");
                    let list: Vec<Value> =
                        shape.iter().map(|(i, s)| json!({ "index": i, "twists": s.twists() })).collect();
                    text_or(text, json!({ "n": t.ambient(), "terms": list }))
                }
                BeilinsonCmd::Dualtable => Output::Json(table::table_json(&dual_beilinson_table(&t))),
            }
        }
        Cmd::Group(gc) => {
            let m = ctx.monad()?;
            match gc {
                GroupCmd::Random { seed, density } => {
                    if !(0.0..=1.0).contains(&density) {
                        return Err(parse_fail(format!("density {density} outside [0, 1]")));
                    }
                    let g = GroupElement::random(&mut random::rng(seed), &m, density);
                    Output::Text(format::print_group(&g, m.ambient(), m.field()))
                }
                GroupCmd::Act { group } => {
                    let g = format::parse_group(&read_file(&group)?)?;
                    check_group_ring(&g, &m)?;
                    Output::Text(format::print_monad(&g.element.act(&m)?))
                }
                GroupCmd::Dual { group, codim } => {
                    let g = format::parse_group(&read_file(&group)?)?;
                    check_group_ring(&g, &m)?;
                    let gd = g.element.induced_dual_element(codim)?;
                    Output::Text(format::print_group(&gd, g.n, g.field))
                }
            }
        }
        Cmd::P3(pc) => match pc {
            P3Cmd::Sample { seed, field, max_tries } => {
                let s = modp3::sample_wss(seed, field_arg(&field)?, max_tries)?;
                let text = format::print_monad(&s.point.to_monad());
                if json {
                    Output::Json(json!({ "seed": seed, "tries": s.tries, "monad": text }))
                } else {
                    Output::Text(text)
                }
            }
            P3Cmd::Check => {
                let v = modp3::wss_membership(&ctx.point()?);
                let codes: Vec<&str> = v.failed.iter().map(|c| c.code()).collect();
                let text = if v.is_member() { "member".to_string() } else { format!("not member: {}", codes.join(", ")) };
                text_or(text, json!({ "member": v.is_member(), "failed": codes }))
            }
            P3Cmd::Dualize => Output::Text(format::print_monad(&ctx.point()?.dualize().to_monad())),
            P3Cmd::Demo { seed, field } => demo(ctx, seed, field_arg(&field)?)?,
            P3Cmd::TwistedCubic { field } => {
                Output::Text(format::print_monad(&modp3::twisted_cubic(field_arg(&field)?).to_monad()))
            }
        },
    })
}

fn check_group_ring(g: &format::ParsedGroup, m: &Monad) -> Result<(), Failure> {
    if g.n != m.ambient() || g.field != m.field() {
        return Err(Failure::Domain(Error::FieldMismatch(
            format!("P {} over {}", m.ambient(), m.field()),
            format!("P {} over {}", g.n, g.field),
        )));
    }
    Ok(())
}

fn demo(ctx: &Ctx, seed: u64, field: Field) -> Result<Output, Failure> {
    let sample = modp3::sample_wss(seed, field, 20)?;
    let pt = &sample.point;
    let verdict = modp3::wss_membership(pt);
    let hilb = hilbert(ctx, &pt.to_monad())?;
    let dual = pt.dualize();
    let dm = dual.to_monad();
    let dual_twists: Vec<Vec<i64>> = dm.terms().iter().map(|t| t.twists().to_vec()).collect();
    let dual_euler = euler_poly(&dm);
    let dual_hilb = hilbert(ctx, &dm)?;
    let m = pt.to_monad();
    let g = GroupElement::random(&mut random::rng(seed ^ 0x9e37_79b9_7f4a_7c15), &m, 1.0);
    let moved = pt.act(&g)?;
    let gd = g.induced_dual_element(modp3::CODIM)?;
    let equivariant = moved.dualize() == dual.act(&gd)?;
    let invariant = modp3::wss_membership(&moved).is_member() == verdict.is_member();
    let ok = verdict.is_member()
        && hilb == IntPoly::from_i64(&[1, 3])
        && dual_euler == IntPoly::from_i64(&[-1, 3])
        && dual_hilb == dual_euler
        && equivariant
        && invariant;
    let value = json!({
        "seed": seed,
        "field": field.to_string(),
        "tries": sample.tries,
        "member": verdict.is_member(),
        "hilbert": hilb.to_string(),
        "dual_twists": dual_twists,
        "dual_euler": dual_euler.to_string(),
        "dual_hilbert": dual_hilb.to_string(),
        "equivariant": equivariant,
        "invariant": invariant,
        "ok": ok,
    });
    if ctx.json {
        return Ok(Output::Json(value));
    }
    let twists: Vec<String> = dual_twists.iter().map(|t| format::print_twists(t)).collect();
    let text = format!(
        "sample: seed {seed} over {field}, accepted after {} draw(s)\n\
         membership: {}\n\
         hilbert polynomial: {hilb}\n\
         dual resolution: {}\n\
         dual euler polynomial: {dual_euler}\n\
         dual hilbert polynomial: {dual_hilb}\n\
         equivariance under a random group element: {equivariant}\n\
         membership invariant under it: {invariant}\n\
         result: {}\n",
        sample.tries,
        if verdict.is_member() { "member" } else { "not member" },
        twists.join(" -> "),
        if ok { "ok" } else { "FAILED" },
    );
    Ok(Output::Text(text))
}

fn error_json(code: &str, message: &str) -> String {
    json!({ "error": code, "message": message }).to_string() + "\n"
}

/// Runs one command line (`args[0]` is the program name).
pub fn run(args: &[String], stdin: &mut dyn Read) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: error_json("parse_error", e.kind().as_str().unwrap_or("usage")), stderr: rendered }
            };
        }
    };
    let out_path = cli.out.clone();
    let mut ctx = Ctx { input: cli.input, json: cli.json, jobs: cli.jobs, stdin };
    match execute(cli.cmd, &mut ctx) {
        Ok(output) => {
            let text = match output {
                Output::Text(t) => t,
                Output::Json(v) => v.to_string() + "\n",
            };
            match out_path {
                Some(path) if path != "-" => match std::fs::write(&path, &text) {
                    Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: 1, stdout: error_json("io_error", &format!("{path}: {e}")), stderr: String::new() },
                },
                _ => Outcome { code: 0, stdout: text, stderr: String::new() },
            }
        }
        Err(Failure::Parse(msg)) => Outcome { code: 2, stdout: error_json("parse_error", &msg), stderr: msg + "\n" },
        Err(Failure::Domain(e)) => {
            let msg = e.to_string();
            Outcome { code: 1, stdout: error_json(e.code(), &msg), stderr: msg + "\n" }
        }
        Err(Failure::Io(msg)) => Outcome { code: 1, stdout: error_json("io_error", &msg), stderr: msg + "\n" },
    }
}
