//! Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{self, Group};
use crate::freeness::{self, DEFAULT_CROSS_CHECK_LEN, DEFAULT_TAU};
use crate::json::{Coefficient, Coefficients};
use crate::literal::parse_unit;
use crate::quadratic::{self, PellNorm, PellSolution, SquareFreeD};
use crate::quaternion::{find_zero_divisor, Basis, Quaternion, TorsionVerdict};
use crate::units::{self, BasisPair, BasisTriple, PellSign, UnitRecord};

#[derive(Debug, Parser)]
#[command(
    name = "quatorder",
    about = "Units of quaternion orders over imaginary quadratic fields",
    version
)]
struct Cli {
    /// Emit JSON documents instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hyperbolicity verdict for one (d, G).
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        group: String,
    },
    /// Verdicts over a range of d and a group catalog.
    Table {
        #[arg(long, default_value_t = -30, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 30, allow_hyphen_values = true)]
        to: i64,
        /// Repeatable; defaults to C2 C3 C4 C5 C6 C8 A[2,2] A[2,4] A[6] K8.
        #[arg(long)]
        group: Vec<String>,
    },
    /// Fundamental solutions of x^2 - d y^2 = +-1.
    FundamentalUnit {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Pell unit from the fundamental solution (or --x/--y).
    PellUnit {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value = "upper", value_parser = parse_sign)]
        sign: PellSign,
        #[command(flatten)]
        solution: SolutionArgs,
    },
    /// Two-unit m*sqrt(-d)*xi + p*psi from a power of the fundamental unit.
    TwoUnit {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// xi,psi
        #[arg(long, default_value = "1,i")]
        pair: String,
        #[arg(long, default_value = "+1", value_parser = parse_norm, allow_hyphen_values = true)]
        norm: PellNorm,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        /// Also check u(e^a) u(e^b) = u(e^(a+b)) on this many random pairs.
        #[arg(long, default_value_t = 0)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pell 3-unit from the fundamental solution over 2d.
    ThreeUnit {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// xi,psi,phi
        #[arg(long, default_value = "1,i,j")]
        triple: String,
    },
    /// Gauss unit m*sqrt(-d) + p i + q j + r k of the given norm.
    GaussUnit {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_parser = parse_norm, allow_hyphen_values = true)]
        norm: PellNorm,
    },
    /// Half-integer generators from m^2 + 2p^2 = 2 + d.
    SUnits {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Membership, norm, support and order of a unit.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
    },
    /// Finite or infinite order of a unit, with the reason.
    Torsion {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
    },
    /// Smallest-height zero divisor of H(R), if any up to --bound.
    ZeroDivisor {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
    /// Ping-pong certificate for <u^m, v^m>.
    FreePair {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Ping-pong certificate for powers of every --unit.
    FreeFamily {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, required = true, allow_hyphen_values = true)]
        unit: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact search for a short relation among the u_i^(+-m).
    RelationCheck {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, required = true, allow_hyphen_values = true)]
        unit: Vec<String>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_CROSS_CHECK_LEN)]
        max_len: usize,
    },
}

#[derive(Debug, Args)]
struct SolutionArgs {
    #[arg(long, requires = "y")]
    x: Option<BigInt>,
    #[arg(long, requires = "x")]
    y: Option<BigInt>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 64)]
    max_m: u32,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Length bound for the exact relation cross-check.
    #[arg(long, default_value_t = DEFAULT_CROSS_CHECK_LEN)]
    max_len: usize,
}

fn parse_norm(s: &str) -> Result<PellNorm, String> {
    match s {
        "+1" | "1" => Ok(PellNorm::Plus),
        "-1" => Ok(PellNorm::Minus),
        _ => Err("expected +1 or -1".into()),
    }
}

fn parse_sign(s: &str) -> Result<PellSign, String> {
    match s {
        "upper" => Ok(PellSign::Upper),
        "lower" => Ok(PellSign::Lower),
        _ => Err("expected upper or lower".into()),
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

fn square_free(d: i64) -> Result<SquareFreeD, Failure> {
    SquareFreeD::new(d).map_err(domain)
}

fn unit_arg(d: SquareFreeD, text: &str) -> Result<Quaternion, Failure> {
    parse_unit(d, text).map_err(usage)
}

fn bases(text: &str) -> Result<Vec<Basis>, Failure> {
    text.split(',')
        .map(|t| {
            Basis::parse(t.trim()).ok_or_else(|| usage(format!("unknown basis element `{t}`")))
        })
        .collect()
}

fn json_line(out: &mut dyn Write, doc: &impl Serialize) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(doc).expect("document serializes")
    )
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Ctx<'_> {
    fn emit(&mut self, doc: &impl Serialize, text: impl FnOnce() -> String) -> Outcome {
        let written = if self.json {
            json_line(self.out, doc)
        } else {
            writeln!(self.out, "{}", text())
        };
        written.map_err(domain)
    }
}

/// Parses `argv` (program name first) and runs one command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut ctx = Ctx {
        out,
        json: cli.json,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Classify { d, group } => {
            let d = square_free(d)?;
            let g: Group = group.parse().map_err(usage)?;
            let v = classify::classify(d, &g).map_err(domain)?;
            ctx.emit(&v, || v.to_string())
        }
        Command::Table { from, to, group } => {
            let catalog = if group.is_empty() {
                classify::default_catalog()
            } else {
                group
                    .iter()
                    .map(|g| g.parse().map_err(usage))
                    .collect::<Result<Vec<Group>, _>>()?
            };
            let rows = classify::verdict_table(from..=to, &catalog).map_err(domain)?;
            // one JSON document per line
            for row in &rows {
                ctx.emit(row, || row.to_string())?;
            }
            Ok(())
        }
        Command::FundamentalUnit { d } => fundamental_unit(d, ctx),
        Command::PellUnit { d, sign, solution } => {
            let d = square_free(d)?;
            let sol = match (solution.x, solution.y) {
                (Some(x), Some(y)) => PellSolution::new(d.get(), x, y).map_err(domain)?,
                _ => quadratic::fundamental_pell(d.get()).map_err(domain)?,
            };
            emit_record(ctx, &units::pell_unit(d, &sol, sign).map_err(domain)?)
        }
        Command::TwoUnit {
            d,
            pair,
            norm,
            power,
            samples,
            seed,
        } => two_unit(d, &pair, norm, power, samples, seed, ctx),
        Command::ThreeUnit { d, triple } => {
            let d = square_free(d)?;
            let [xi, psi, phi] = bases(&triple)?[..] else {
                return Err(usage("--triple needs three basis elements"));
            };
            let triple = BasisTriple::new(xi, psi, phi).map_err(usage)?;
            let sol = quadratic::fundamental_pell(2 * d.get()).map_err(domain)?;
            emit_record(
                ctx,
                &units::pell_three_unit_from(d, &sol, triple).map_err(domain)?,
            )
        }
        Command::GaussUnit { d, m, norm } => {
            let d = square_free(d)?;
            emit_record(ctx, &units::gauss_unit(d, m, norm).map_err(domain)?)
        }
        Command::SUnits { d } => {
            let d = square_free(d)?;
            let records = units::s_generator_units(d).map_err(domain)?;
            ctx.emit(&records, || {
                records
                    .iter()
                    .map(|r| r.unit().to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Command::Verify { d, unit } => {
            let d = square_free(d)?;
            verify(&unit_arg(d, &unit)?, ctx)
        }
        Command::Torsion { d, unit } => {
            let d = square_free(d)?;
            let u = unit_arg(d, &unit)?;
            let verdict = u.torsion_order().map_err(domain)?;
            let doc = TorsionDoc {
                d,
                unit: u.to_string(),
                verdict,
            };
            ctx.emit(&doc, || format!("{u}: {verdict}"))
        }
        Command::ZeroDivisor { d, bound } => {
            let d = square_free(d)?;
            if bound == 0 {
                return Err(usage("--bound must be positive"));
            }
            let found = find_zero_divisor(d, bound);
            let doc = ZeroDivisorDoc {
                d,
                bound,
                witness: found.as_ref().map(|u| u.to_string()),
                coefficients: found.as_ref().map(Coefficients),
            };
            ctx.emit(&doc, || match &found {
                Some(u) => format!("{u} has norm 0"),
                None => format!("no zero divisor with coefficient height <= {bound}"),
            })
        }
        Command::FreePair { d, u, v, search } => {
            let d = square_free(d)?;
            free(vec![unit_arg(d, &u)?, unit_arg(d, &v)?], &search, ctx)
        }
        Command::FreeFamily { d, unit, search } => {
            let d = square_free(d)?;
            let units = unit
                .iter()
                .map(|t| unit_arg(d, t))
                .collect::<Result<Vec<_>, _>>()?;
            free(units, &search, ctx)
        }
        Command::RelationCheck {
            d,
            unit,
            m,
            max_len,
        } => {
            let d = square_free(d)?;
            let units = unit
                .iter()
                .map(|t| unit_arg(d, t))
                .collect::<Result<Vec<_>, _>>()?;
            for (t, u) in units.iter().enumerate() {
                if !u.is_unit_of_order() {
                    return Err(domain(format!(
                        "unit {} ({u}) is not a unit of H(R)",
                        t + 1
                    )));
                }
            }
            let word = freeness::relation_search(&units, m, max_len).map_err(domain)?;
            let doc = RelationDoc {
                d,
                m,
                max_len,
                relation: word.as_ref().map(|w| w.letters.clone()),
            };
            ctx.emit(&doc, || match &word {
                Some(w) => format!("relation: {w}"),
                None => format!("no relation of length <= {max_len} at m = {m}"),
            })
        }
    }
}

fn emit_record(ctx: &mut Ctx, r: &UnitRecord) -> Outcome {
    ctx.emit(r, || format!("{} (norm {})", r.unit(), r.norm()))
}

#[derive(Serialize)]
struct FundamentalDoc {
    d: i64,
    plus: PellSolution,
    minus: Option<PellSolution>,
}

fn fundamental_unit(d: i64, ctx: &mut Ctx) -> Outcome {
    let plus = quadratic::fundamental_pell(d).map_err(domain)?;
    let minus = quadratic::negative_pell(d).map_err(domain)?;
    let doc = FundamentalDoc { d, plus, minus };
    ctx.emit(&doc, || {
        let minus = match &doc.minus {
            Some(s) => format!("({}, {})", s.x(), s.y()),
            None => "none".into(),
        };
        format!(
            "x^2 - {d} y^2 = +1: ({}, {})\nx^2 - {d} y^2 = -1: {minus}",
            doc.plus.x(),
            doc.plus.y()
        )
    })
}

#[derive(Serialize)]
struct HomomorphismDoc<'a> {
    unit: &'a UnitRecord,
    samples: u32,
    seed: u64,
    agreed: u32,
}

fn two_unit(
    d: i64,
    pair: &str,
    norm: PellNorm,
    power: i64,
    samples: u32,
    seed: u64,
    ctx: &mut Ctx,
) -> Outcome {
    let d = square_free(d)?;
    let [xi, psi] = bases(pair)?[..] else {
        return Err(usage("--pair needs two basis elements"));
    };
    let pair = BasisPair::new(xi, psi).map_err(usage)?;
    let sol = match norm {
        PellNorm::Plus => quadratic::fundamental_pell(d.get()).map_err(domain)?,
        PellNorm::Minus => quadratic::negative_pell(d.get())
            .map_err(domain)?
            .ok_or_else(|| domain(format!("x^2 - {} y^2 = -1 has no solution", d.get())))?,
    };
    let eps = sol
        .to_quad_int()
        .ok_or_else(|| domain(format!("Z[sqrt({})] is not the ring of integers", d.get())))?;
    let at = |n: i64| -> Result<UnitRecord, Failure> {
        let e = eps.pow_signed(n).expect("fundamental solution is a unit");
        units::two_unit(d, &e, pair).map_err(domain)
    };
    let record = at(power)?;
    if samples == 0 {
        return emit_record(ctx, &record);
    }
    if pair.psi != Basis::One {
        return Err(domain("the product rule needs psi = 1, e.g. --pair i,1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreed = 0;
    for _ in 0..samples {
        let (a, b) = (rng.gen_range(-12..=12), rng.gen_range(-12..=12));
        let product = at(a)?.unit() * at(b)?.unit();
        if product == *at(a + b)?.unit() {
            agreed += 1;
        }
    }
    let doc = HomomorphismDoc {
        unit: &record,
        samples,
        seed,
        agreed,
    };
    ctx.emit(&doc, || {
        format!(
            "{} (norm {})\nu(e^a) u(e^b) = u(e^(a+b)): {agreed}/{samples} pairs (seed {seed})",
            record.unit(),
            record.norm()
        )
    })?;
    if agreed == samples {
        Ok(())
    } else {
        Err(domain(format!(
            "{} pairs violate the product rule",
            samples - agreed
        )))
    }
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    d: SquareFreeD,
    unit: String,
    coefficients: Coefficients<'a>,
    in_order: bool,
    is_unit: bool,
    norm: Coefficient<'a>,
    support: Vec<Basis>,
    torsion: Option<TorsionVerdict>,
    pell_unit: bool,
    gauss_unit: bool,
}

fn support_text(u: &Quaternion) -> String {
    let names: Vec<&str> = u.support().iter().map(|e| e.symbol()).collect();
    format!("{{{}}}", names.join(","))
}

fn verify(u: &Quaternion, ctx: &mut Ctx) -> Outcome {
    let is_unit = u.is_unit_of_order();
    let torsion = if is_unit {
        Some(u.torsion_order().map_err(domain)?)
    } else {
        None
    };
    let norm = u.norm();
    let doc = VerifyDoc {
        d: u.d(),
        unit: u.to_string(),
        coefficients: Coefficients(u),
        in_order: u.in_order(),
        is_unit,
        norm: Coefficient::of(&norm),
        support: u.support(),
        torsion,
        pell_unit: is_unit && (2..=3).any(|l| units::is_pell_l_unit(u, l)),
        gauss_unit: is_unit && units::is_gauss_unit(u),
    };
    ctx.emit(&doc, || match torsion {
        Some(t) => format!(
            "unit of H(R), norm {norm}, support {}, {t}",
            support_text(u)
        ),
        None if u.in_order() => format!(
            "in H(R) but not a unit, norm {norm}, support {}",
            support_text(u)
        ),
        None => format!("not in H(R), norm {norm}, support {}", support_text(u)),
    })?;
    if is_unit {
        Ok(())
    } else {
        Err(domain(format!("{u} is not a unit of H(R)")))
    }
}

#[derive(Serialize)]
struct TorsionDoc {
    d: SquareFreeD,
    unit: String,
    #[serde(flatten)]
    verdict: TorsionVerdict,
}

#[derive(Serialize)]
struct ZeroDivisorDoc<'a> {
    d: SquareFreeD,
    bound: u32,
    witness: Option<String>,
    coefficients: Option<Coefficients<'a>>,
}

#[derive(Serialize)]
struct RelationDoc {
    d: SquareFreeD,
    m: u32,
    max_len: usize,
    relation: Option<Vec<freeness::Letter>>,
}

fn free(units: Vec<Quaternion>, search: &SearchArgs, ctx: &mut Ctx) -> Outcome {
    if search.tau.is_nan() || search.tau <= 0.0 {
        return Err(usage("--tau must be positive"));
    }
    let mut cert =
        freeness::schottky_certificate(&units, search.max_m, search.tau).map_err(domain)?;
    let check = cert.cross_check(search.max_len).map_err(domain)?;
    ctx.emit(&cert, || cert.to_string())?;
    if check.relations_found > 0 {
        return Err(domain("exact relation found despite the certificate"));
    }
    Ok(())
}
