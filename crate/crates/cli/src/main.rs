//! `cuntz`: command-line front end for cuntz-core.
//!
//! Exit status: 0 true (or a plain computation), 1 false, 2 invalid
//! configuration, 3 unknown, 4 internal invariant breach.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cuntz_core::cu::{check_cu_axioms, lambda_of_ring, FiniteMonoid, Range, Symbolic};
use cuntz_core::ring::{check_weakly_s_unital, SUnitalOptions};
use cuntz_core::seq::{
    idem_to_seq, is_compact_seq, parse_matrix_list, parse_sequence, realized_classes, seq_sup, seq_to_idem, splitting_check, validate_seq, ColIdem,
    SeqElem,
};
use cuntz_core::shift::{self, CompactSearch, Monomial, ShiftBounds};
use cuntz_core::states::{state_polytope, Feasibility, Sampling, Variant};
use cuntz_core::subequiv::{precsim1_with, precsim_m, MalcolmsonOptions, Strategy, Sub1Options};
use cuntz_core::uniserial::diagonalize_seeded;
use cuntz_core::verdict::DEFAULT_BUDGET;
use cuntz_core::wr::{build_v, build_w, covers, TruncatedPoM, WOptions};
use cuntz_core::{dot, Certificate, Error, FiniteRing, Idem, Mat, Ring, RingSpec, Verdict};

use output::{Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "cuntz", version, about = "Comparison invariants of finite rings")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    out: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Write a run manifest (ring digest, bounds, verdicts) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    /// Seed for sampled checks and tie-breaking.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Candidate evaluations allowed per witness search.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,
}

#[derive(Args, Debug, Clone)]
struct RingArg {
    /// Inline ring spec (`zmod4`, `gf2`, `matrix(gf2,2)`, `product(gf2,gf3)`,
    /// `ideal(zmod4,2)`) or the path of a ring file.
    #[arg(long)]
    ring: String,
}

#[derive(Args, Debug, Clone)]
struct Bound {
    /// Largest matrix size in the truncation.
    #[arg(long = "k-max", alias = "kmax", default_value_t = 2)]
    k_max: usize,
    /// Largest padded universe `|R|^(k²)` accepted.
    #[arg(long, default_value_t = 1 << 22)]
    universe_limit: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Relation {
    One,
    Malcolmson,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Generic,
    FieldRank,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StateVariant {
    Dimension,
    Sylvester,
}

#[derive(Args, Debug, Clone)]
struct MonoidOrRing {
    /// Ring spec or file; the model is built from `W` of the ring.
    #[arg(long, conflicts_with = "monoid")]
    ring: Option<String>,
    /// Built-in symbolic monoid: `N`, `Nbar`, `Nbar^r`, `0inf`, `nsd`,
    /// `lambda(N)`, `lambda(nsd)`.
    #[arg(long)]
    monoid: Option<String>,
    #[arg(long = "k-max", alias = "kmax", default_value_t = 2)]
    k_max: usize,
    /// Largest finite coordinate shown or checked for symbolic monoids.
    #[arg(long, default_value_t = 3)]
    bound: u64,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Decide `a ≼₁ b` (or the Malcolmson relation).
    Precsim {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = Relation::One)]
        relation: Relation,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Malcolmson chain depth.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Malcolmson intermediate size cap.
        #[arg(long, default_value_t = 2)]
        size_cap: usize,
    },
    /// Truncated `W(R)`.
    ComputeW {
        #[command(flatten)]
        ring: RingArg,
        #[command(flatten)]
        bound: Bound,
    },
    /// Truncated `V(R)` with the comparison map into `W(R)`.
    ComputeV {
        #[command(flatten)]
        ring: RingArg,
        #[command(flatten)]
        bound: Bound,
    },
    /// Interval completion of a truncated `W(R)` or of a symbolic monoid.
    ComputeLambda {
        #[command(flatten)]
        src: MonoidOrRing,
    },
    /// Axioms O1–O4 on a symbolic monoid or on the interval model of a ring.
    CheckCu {
        #[command(flatten)]
        src: MonoidOrRing,
        /// Largest chain slope for symbolic checks.
        #[arg(long, default_value_t = 1)]
        slope: u64,
    },
    /// Compact elements (`x ≪ x`).
    Compacts {
        #[command(flatten)]
        src: MonoidOrRing,
        /// Also search for sequences realizing each interval class.
        #[arg(long)]
        realize: bool,
    },
    /// State polytope at an order unit.
    States {
        #[command(flatten)]
        src: MonoidOrRing,
        /// Order unit: a class index for rings, a point like `(1,0)` for
        /// symbolic monoids. Defaults to the class of `[1]`.
        #[arg(long)]
        unit: Option<String>,
        #[arg(long, value_enum, default_value_t = StateVariant::Dimension)]
        variant: StateVariant,
        /// Sample size above the exhaustive limit for block-triangular triples.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
    /// Validate a sequence literal `stages | witnesses | tail`.
    SeqValidate {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        seq: String,
    },
    /// Idempotent column matrix of a sequence.
    SeqToIdem {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        seq: String,
        /// Extra tail stages unrolled for stabilized sequences.
        #[arg(long, default_value_t = 1)]
        extra: usize,
        /// Also evaluate the splitting map on stage generators.
        #[arg(long)]
        splitting: bool,
    },
    /// Sequence of an idempotent, or of corner matrices `Z_1 Z_2 ...`.
    IdemToSeq {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, conflicts_with = "corners")]
        idem: Option<String>,
        #[arg(long)]
        corners: Option<String>,
    },
    /// Supremum of an increasing chain of sequences (repeat --seq).
    SeqSup {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, required = true)]
        seq: Vec<String>,
        /// Continue with the last member's later stages and tail.
        #[arg(long)]
        close: bool,
    },
    /// Compactness of a sequence via `z = s·z²`.
    SeqCompact {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        seq: String,
        /// Largest square size for the exhaustive fallback.
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Diagonalize over `ℤ/p^k` with a certificate `U·A·V = D`.
    Diagonalize {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        a: String,
        /// Randomize pivot tie-breaking with the global seed.
        #[arg(long)]
        shuffle: bool,
    },
    /// Weak s-unitality up to matrix size n.
    SUnital {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Polynomials in `x_0, x_1, ...` with `x_{i+1}·x_i = x_i`.
    Shift {
        #[command(subcommand)]
        op: ShiftOp,
    },
    /// Run a key/value run file.
    Run { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
struct ShiftField {
    /// Prime coefficient field.
    #[arg(long, default_value = "gf2")]
    ring: String,
    #[arg(long, default_value_t = 4)]
    vars: usize,
    #[arg(long, default_value_t = 6)]
    degree: usize,
}

#[derive(Subcommand, Debug)]
enum ShiftOp {
    /// Normal form of a word.
    Nf {
        #[arg(long)]
        word: String,
    },
    /// Product of two polynomials.
    Mul {
        #[command(flatten)]
        field: ShiftField,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Smallest variable index of a monomial.
    St {
        #[arg(long)]
        mono: String,
    },
    /// Nonzero solutions of `z = s·z²` within bounds.
    CompactSearch {
        #[arg(long, default_value = "gf2")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Degree bound of the entries of `s` (and of scalar `z`).
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Matrix size.
        #[arg(long, default_value_t = 1)]
        size: usize,
        /// Degree bound of the entries of `z`; defaults to --degree.
        #[arg(long)]
        z_degree: Option<usize>,
        /// Solve `z = z²·s` instead.
        #[arg(long)]
        mirrored: bool,
        /// Largest number of `z` candidates.
        #[arg(long, default_value_t = 1 << 22)]
        candidates: u64,
    },
}

fn load_ring(text: &str) -> cuntz_core::Result<Ring> {
    let path = std::path::Path::new(text);
    let spec = if path.is_file() {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::RingSpec(format!("cannot read {}: {e}", path.display())))?;
        RingSpec::parse_file(&body)?
    } else {
        RingSpec::parse(text)?
    };
    FiniteRing::construct(&spec)
}

fn sub1(g: &Global) -> Sub1Options {
    Sub1Options {
        budget: g.budget,
        ..Sub1Options::default()
    }
}

fn w_opts(g: &Global, universe_limit: u64) -> WOptions {
    WOptions {
        search: sub1(g),
        universe_limit,
    }
}

fn mat(ring: &Ring, text: &str) -> cuntz_core::Result<Mat> {
    Mat::parse(ring, text)
}

fn class_labels(w: &TruncatedPoM) -> Vec<String> {
    w.classes.iter().map(|m| m.to_string()).collect()
}

fn symbolic_truncation(text: &str, bound: u64) -> cuntz_core::Result<(Symbolic, FiniteMonoid)> {
    let s = Symbolic::parse(text)?;
    let m = s.truncation(bound);
    Ok((s, m))
}

fn table_text(labels: &[String], leq: &[Vec<bool>]) -> String {
    let mut t = String::new();
    for (i, l) in labels.iter().enumerate() {
        let above: Vec<&str> = (0..labels.len())
            .filter(|&j| j != i && leq[i][j])
            .map(|j| labels[j].as_str())
            .collect();
        t.push_str(&format!("{i}: {l}  <=  {}\n", above.join(", ")));
    }
    t
}

fn run(verb: Verb, g: &Global) -> cuntz_core::Result<Outcome> {
    let mut o = Outcome::new();
    match verb {
        Verb::Precsim {
            ring,
            a,
            b,
            relation,
            strategy,
            depth,
            size_cap,
        } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            let (a, b) = (mat(&r, &a)?, mat(&r, &b)?);
            let mut search = sub1(g);
            search.strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Generic => Strategy::Generic,
                StrategyArg::FieldRank => Strategy::FieldRank,
            };
            o.bound("budget", g.budget);
            match relation {
                Relation::One => {
                    let d = precsim1_with(&a, &b, &search)?;
                    o.text = match &d.witness {
                        Some(w) => format!("{} ({:?})\nr = {}\nt = {}\n", d.verdict, d.certificate, w.r, w.t),
                        None => format!("{} ({:?})\n", d.verdict, d.certificate),
                    };
                    o.decide("precsim1", d.verdict, d.certificate);
                    o.result = json!({ "relation": "one", "a": a, "b": b, "decision": d });
                }
                Relation::Malcolmson => {
                    o.bound("depth", depth);
                    o.bound("size_cap", size_cap);
                    let opts = MalcolmsonOptions {
                        depth,
                        size_cap,
                        budget: g.budget,
                        search,
                    };
                    let rep = precsim_m(&a, &b, &opts)?;
                    o.text = format!("{} ({:?}), {} steps\n", rep.verdict, rep.certificate, rep.chain.len());
                    o.decide("precsim_m", rep.verdict, rep.certificate);
                    o.result = json!({ "relation": "malcolmson", "a": a, "b": b, "report": rep });
                }
            }
        }
        Verb::ComputeW { ring, bound } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            o.bound("k_max", bound.k_max);
            o.bound("universe_limit", bound.universe_limit);
            let w = build_w(&r, bound.k_max, &w_opts(g, bound.universe_limit))?;
            let worst = w.add_certificate.iter().flatten().copied().fold(Certificate::Exact, Certificate::weaker);
            o.certify("sums", worst);
            o.text = format!(
                "W({}) up to {}x{}: {} classes, chain: {}\n{}",
                w.ring,
                w.k_max,
                w.k_max,
                w.len(),
                w.is_chain(),
                table_text(&class_labels(&w), &w.leq)
            );
            o.dot = Some(w.to_dot());
            o.result = serde_json::to_value(&w).expect("serializable");
        }
        Verb::ComputeV { ring, bound } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            o.bound("k_max", bound.k_max);
            let w = build_w(&r, bound.k_max, &w_opts(g, bound.universe_limit))?;
            let v = build_v(&w, &sub1(g))?;
            o.text = format!(
                "V({}) up to {}x{}: {} classes; iota injective {}, order embedding {}, surjective {}\n",
                v.ring,
                v.k_max,
                v.k_max,
                v.len(),
                v.iota_injective,
                v.iota_order_embedding,
                v.iota_surjective
            );
            o.dot = Some(v.to_dot());
            o.result = serde_json::to_value(&v).expect("serializable");
        }
        Verb::ComputeLambda { src } => match (&src.ring, &src.monoid) {
            (Some(ring), _) => {
                let r = load_ring(ring)?;
                o.ring = Some(r.clone());
                o.bound("k_max", src.k_max);
                let w = build_w(&r, src.k_max, &w_opts(g, 1 << 22))?;
                let model = lambda_of_ring(&w);
                o.certify("model", model.certificate);
                o.text = format!(
                    "Lambda(W({})): {} elements\n{}",
                    w.ring,
                    model.len(),
                    table_text(&model.labels, &model.leq)
                );
                o.dot = Some(model.to_dot());
                o.result = serde_json::to_value(&model).expect("serializable");
            }
            (None, Some(name)) => {
                o.bound("bound", src.bound);
                let (s, m) = symbolic_truncation(name, src.bound)?;
                o.text = format!("{s} up to {}: {} elements\n{}", src.bound, m.len(), table_text(&m.labels, &m.leq));
                o.dot = Some(dot::hasse(&s.to_string(), &m.labels, &covers(&m.leq), &[]));
                o.result = json!({ "monoid": s.to_string(), "bound": src.bound, "fragment": m });
            }
            _ => return Err(Error::Precondition("give --ring or --monoid".into())),
        },
        Verb::CheckCu { src, slope } => {
            let rep = match (&src.ring, &src.monoid) {
                (Some(ring), _) => {
                    let r = load_ring(ring)?;
                    o.ring = Some(r.clone());
                    o.bound("k_max", src.k_max);
                    let w = build_w(&r, src.k_max, &w_opts(g, 1 << 22))?;
                    lambda_of_ring(&w).check(&w)
                }
                (None, Some(name)) => {
                    o.bound("bound", src.bound);
                    o.bound("slope", slope);
                    check_cu_axioms(&Symbolic::parse(name)?, &Range { bound: src.bound, slope })
                }
                _ => return Err(Error::Precondition("give --ring or --monoid".into())),
            };
            let mut text = format!("{}\n", rep.monoid);
            for a in &rep.axioms {
                o.decide(&a.axiom, a.verdict, a.certificate);
                text.push_str(&format!("{}: {} ({:?}, {} checked)", a.axiom, a.verdict, a.certificate, a.checked));
                if let Some(c) = &a.counterexample {
                    text.push_str(&format!("  counterexample: {c}"));
                }
                text.push('\n');
            }
            o.text = text;
            o.result = serde_json::to_value(&rep).expect("serializable");
        }
        Verb::Compacts { src, realize } => match (&src.ring, &src.monoid) {
            (Some(ring), _) => {
                let r = load_ring(ring)?;
                o.ring = Some(r.clone());
                o.bound("k_max", src.k_max);
                let w = build_w(&r, src.k_max, &w_opts(g, 1 << 22))?;
                let model = lambda_of_ring(&w);
                let compact: Vec<&str> = model.compacts().into_iter().map(|i| model.labels[i].as_str()).collect();
                o.text = format!("compact: {}\n", compact.join(", "));
                let realized = if realize {
                    let rs = realized_classes(&w, &model, &sub1(g))?;
                    for x in &rs {
                        o.text.push_str(&format!("{}: realized {} ({:?})\n", x.element, x.verdict, x.certificate));
                    }
                    Some(rs)
                } else {
                    None
                };
                o.result = json!({ "compact": compact, "model": model, "realized": realized });
            }
            (None, Some(name)) => {
                o.bound("bound", src.bound);
                let (s, m) = symbolic_truncation(name, src.bound)?;
                let compact: Vec<&str> = (0..m.len())
                    .filter(|&i| m.way_below(i, i))
                    .map(|i| m.labels[i].as_str())
                    .collect();
                o.text = format!("compact in {s} up to {}: {}\n", src.bound, compact.join(", "));
                o.result = json!({ "monoid": s.to_string(), "bound": src.bound, "compact": compact });
            }
            _ => return Err(Error::Precondition("give --ring or --monoid".into())),
        },
        Verb::States {
            src,
            unit,
            variant,
            samples,
        } => {
            let sampling = Sampling {
                samples,
                seed: g.seed,
                ..Sampling::default()
            };
            let poly = match (&src.ring, &src.monoid) {
                (Some(ring), _) => {
                    let r = load_ring(ring)?;
                    o.ring = Some(r.clone());
                    o.bound("k_max", src.k_max);
                    let w = build_w(&r, src.k_max, &w_opts(g, 1 << 22))?;
                    let m = FiniteMonoid::from_truncated(&w);
                    let u = match unit {
                        Some(u) => u
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("unit must be a class index, got {u:?}")))?,
                        None => w
                            .unit
                            .ok_or_else(|| Error::Precondition("non-unital ring: give --unit".into()))?,
                    };
                    let v = match variant {
                        StateVariant::Dimension => Variant::Dimension,
                        StateVariant::Sylvester => Variant::Sylvester { w: &w, sampling },
                    };
                    state_polytope(&m, u, &v)?
                }
                (None, Some(name)) => {
                    o.bound("bound", src.bound);
                    let (_, m) = symbolic_truncation(name, src.bound)?;
                    let want: String = unit.unwrap_or_else(|| "1".into()).chars().filter(|c| !c.is_whitespace()).collect();
                    let u = m
                        .labels
                        .iter()
                        .position(|l| *l == want)
                        .ok_or_else(|| Error::Precondition(format!("{want} is not in the fragment")))?;
                    if let StateVariant::Sylvester = variant {
                        return Err(Error::Unsupported("the Sylvester variant needs a ring".into()));
                    }
                    state_polytope(&m, u, &Variant::Dimension)?
                }
                _ => return Err(Error::Precondition("give --ring or --monoid".into())),
            };
            let verdict = match poly.feasibility {
                Feasibility::Nonempty => Verdict::True,
                Feasibility::Empty => Verdict::False,
                Feasibility::Unknown => Verdict::Unknown,
            };
            let cert = if poly.sampled { Certificate::Sampled } else { Certificate::TruncationRelative };
            o.decide("nonempty", verdict, cert);
            let mut text = format!("states of {} at {} ({}): {:?}\n", poly.monoid, poly.labels[poly.unit], poly.variant, poly.feasibility);
            if let Some(vs) = &poly.vertices {
                for v in vs {
                    let parts: Vec<String> = v.iter().map(|x| x.0.to_string()).collect();
                    text.push_str(&format!("vertex ({})\n", parts.join(", ")));
                }
            }
            o.text = text;
            o.result = serde_json::to_value(&poly).expect("serializable");
        }
        Verb::SeqValidate { ring, seq } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            let s = parse_sequence(&r, &seq, &sub1(g))?;
            let rep = validate_seq(&s);
            o.decide("valid", rep.verdict, Certificate::Exact);
            o.text = format!("{}: {}\n{}", s.describe(), rep.verdict, rep.violations.join("\n"));
            o.result = json!({ "sequence": s, "report": rep });
        }
        Verb::SeqToIdem {
            ring,
            seq,
            extra,
            splitting,
        } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            o.bound("extra", extra);
            let s = parse_sequence(&r, &seq, &sub1(g))?;
            let rep = seq_to_idem(&s, extra)?;
            o.text = format!("blocks {:?}\nE = {}\n", rep.blocks, rep.matrix);
            let split = if splitting {
                let sp = splitting_check(&s, extra)?;
                let ok = sp.identity && sp.iota_compatible;
                o.decide("splitting", Verdict::from_bool(ok), Certificate::StageRelative);
                o.text.push_str(&format!("splitting identity: {ok}\n"));
                Some(sp)
            } else {
                None
            };
            o.result = json!({ "idempotent": rep, "splitting": split });
        }
        Verb::IdemToSeq { ring, idem, corners } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            let e = match (idem, corners) {
                (Some(i), _) => ColIdem::Finite(Idem::new(mat(&r, &i)?)?),
                (None, Some(c)) => ColIdem::corners(parse_matrix_list(&r, &c)?)?,
                _ => return Err(Error::Precondition("give --idem or --corners".into())),
            };
            let s = idem_to_seq(&e)?;
            o.text = format!("{}\n", s.describe());
            o.result = json!({ "sequence": s });
        }
        Verb::SeqSup { ring, seq, close } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            let opts = sub1(g);
            let chain = seq
                .iter()
                .map(|t| parse_sequence(&r, t, &opts))
                .collect::<cuntz_core::Result<Vec<SeqElem>>>()?;
            let s = seq_sup(&chain, &[], close, &opts)?;
            let rep = validate_seq(&s);
            if !rep.verdict.is_true() {
                return Err(Error::Invariant(format!("the supremum does not validate: {:?}", rep.violations)));
            }
            o.text = format!("{}\n", s.describe());
            o.result = json!({ "supremum": s });
        }
        Verb::SeqCompact { ring, seq, bound } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            o.bound("bound", bound);
            let s = parse_sequence(&r, &seq, &sub1(g))?;
            let rep = is_compact_seq(&s, bound, &sub1(g))?;
            o.decide("compact", rep.verdict, rep.certificate);
            o.text = match (&rep.z, &rep.s) {
                (Some(z), Some(w)) => format!("{} ({:?}) via {}\nz = {z}\ns = {w}\n", rep.verdict, rep.certificate, rep.method),
                _ => format!("{} ({:?}) via {}\n", rep.verdict, rep.certificate, rep.method),
            };
            o.result = serde_json::to_value(&rep).expect("serializable");
        }
        Verb::Diagonalize { ring, a, shuffle } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            let a = mat(&r, &a)?;
            let cert = diagonalize_seeded(&a, shuffle.then_some(g.seed))?;
            cert.verify().map_err(|e| Error::Invariant(format!("certificate does not verify: {e}")))?;
            o.decide("verified", Verdict::True, Certificate::Exact);
            o.text = format!(
                "D = {}\nU = {}\nV = {}\nvaluations {:?}, {} row and {} column operations\n",
                cert.d,
                cert.u,
                cert.v,
                cert.valuations(),
                cert.row_ops.len(),
                cert.col_ops.len()
            );
            o.result = json!({ "certificate": cert, "valuations": cert.valuations() });
        }
        Verb::SUnital { ring, n } => {
            let r = load_ring(&ring.ring)?;
            o.ring = Some(r.clone());
            o.bound("n", n);
            let opts = SUnitalOptions {
                seed: g.seed,
                search: sub1(g),
                ..SUnitalOptions::default()
            };
            let rep = check_weakly_s_unital(&r, n, &opts)?;
            let mut text = String::new();
            for l in &rep.levels {
                o.decide(&format!("n={}", l.n), l.verdict, l.certificate);
                text.push_str(&format!("n={}: {} ({:?})", l.n, l.verdict, l.certificate));
                if let Some(c) = &l.counterexample {
                    text.push_str(&format!("  counterexample {c}"));
                }
                text.push('\n');
            }
            o.text = text;
            o.result = serde_json::to_value(&rep).expect("serializable");
        }
        Verb::Shift { op } => shift_op(op, &mut o)?,
        Verb::Run { .. } => unreachable!("handled before dispatch"),
    }
    Ok(o)
}

fn shift_op(op: ShiftOp, o: &mut Outcome) -> cuntz_core::Result<()> {
    match op {
        ShiftOp::Nf { word } => {
            let w = shift::parse_word(&word)?;
            let m = Monomial::from_word(&w)?;
            o.text = format!("{m}\n");
            o.result = json!({ "word": w, "normal_form": m.to_string(), "degree": m.degree() });
        }
        ShiftOp::St { mono } => {
            let m = Monomial::parse(&mono)?;
            o.text = format!("{}\n", m.st());
            o.result = json!({ "monomial": m.to_string(), "st": m.st() });
        }
        ShiftOp::Mul { field, p, q } => {
            let f = load_ring(&field.ring)?;
            o.ring = Some(f.clone());
            o.bound("vars", field.vars);
            o.bound("degree", field.degree);
            let b = ShiftBounds::new(&f, field.vars, field.degree)?;
            let (p, q) = (b.parse(&p)?, b.parse(&q)?);
            let pq = p.mul(&q)?;
            o.text = format!("{pq}\n");
            o.result = json!({ "p": p, "q": q, "product": pq });
        }
        ShiftOp::CompactSearch {
            ring,
            vars,
            degree,
            size,
            z_degree,
            mirrored,
            candidates,
        } => {
            let f = load_ring(&ring)?;
            o.ring = Some(f.clone());
            let search = CompactSearch {
                vars,
                degree,
                size,
                z_degree: z_degree.unwrap_or(degree),
                mirrored,
                budget: candidates,
            };
            o.bound("vars", vars);
            o.bound("degree", degree);
            o.bound("size", size);
            o.bound("z_degree", search.z_degree);
            o.bound("candidates", candidates);
            let rep = shift::search_compact_solutions(&f, &search)?;
            let verdict = if !rep.nonzero_solutions.is_empty() {
                Verdict::False
            } else if rep.complete {
                Verdict::True
            } else {
                Verdict::Unknown
            };
            o.decide("only_zero", verdict, Certificate::TruncationRelative);
            o.text = format!(
                "{}: {} nonzero solutions; {}{}\n",
                rep.equation,
                rep.nonzero_solutions.len(),
                rep.covered,
                if rep.complete { "" } else { " (partial)" }
            );
            o.result = serde_json::to_value(&rep).expect("serializable");
        }
    }
    Ok(())
}

fn verb_label(v: &Verb) -> String {
    let name = match v {
        Verb::Precsim { .. } => "precsim",
        Verb::ComputeW { .. } => "compute-w",
        Verb::ComputeV { .. } => "compute-v",
        Verb::ComputeLambda { .. } => "compute-lambda",
        Verb::CheckCu { .. } => "check-cu",
        Verb::Compacts { .. } => "compacts",
        Verb::States { .. } => "states",
        Verb::SeqValidate { .. } => "seq-validate",
        Verb::SeqToIdem { .. } => "seq-to-idem",
        Verb::IdemToSeq { .. } => "idem-to-seq",
        Verb::SeqSup { .. } => "seq-sup",
        Verb::SeqCompact { .. } => "seq-compact",
        Verb::Diagonalize { .. } => "diagonalize",
        Verb::SUnital { .. } => "s-unital",
        Verb::Shift { op } => match op {
            ShiftOp::Nf { .. } => "shift nf",
            ShiftOp::Mul { .. } => "shift mul",
            ShiftOp::St { .. } => "shift st",
            ShiftOp::CompactSearch { .. } => "shift compact-search",
        },
        Verb::Run { .. } => "run",
    };
    name.to_string()
}

fn exit_for_error(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 4,
        Error::Budget(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().collect();
    // A run file stands in for the verb and its flags; global flags given
    // on the command line still apply.
    if args.get(1).map(String::as_str) == Some("run") {
        let Some(path) = args.get(2) else {
            eprintln!("error: run needs a file");
            return ExitCode::from(2);
        };
        let body = match std::fs::read_to_string(path) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("error: cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        };
        match config::argv_from_file(&body) {
            Ok(mut argv) => {
                argv.insert(0, args[0].clone());
                argv.extend(args.drain(3..));
                args = argv;
            }
            Err(e) => {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = cli.global.clone();
    if g.jobs == 0 || g.budget == 0 {
        eprintln!("error: --jobs and --budget must be positive");
        return ExitCode::from(2);
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(g.jobs).build_global();
    let verb_name = verb_label(&cli.verb);
    match run(cli.verb, &g) {
        Ok(outcome) => match outcome.emit(&verb_name, &g) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}
