//! Command-line surface of the toric kernel: parse JSON inputs, dispatch
//! computations, emit one machine-readable JSON document per invocation.
//!
//! Exit codes: 0 on success, 1 when the inputs parse but fail validation or
//! a precondition (the report still goes to standard output), 2 on
//! malformed input (diagnostic on standard error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::value::RawValue;

use toric::cohomology::{h_vector, intersection_number_in, CohomologyRing, Divisor};
use toric::equivariant::equivariant_consistency_check;
use toric::fan::Fan;
use toric::json;
use toric::linalg::Rat;
use toric::polytope::bkk_check;
use toric::twist::detect_fibered;

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Exact computations on fans, twisted products, and fibered toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON document to a file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan: validity, smoothness, completeness.
    Validate { fan: PathBuf },
    /// Construct the twisted product fan of twist data.
    Twist { twist: PathBuf },
    /// Split a fan as a twisted product over a coordinate sublattice.
    Split {
        fan: PathBuf,
        /// Comma-separated coordinates of the base sublattice.
        #[arg(long, value_delimiter = ',', required = true)]
        base_coords: Vec<usize>,
    },
    /// Betti numbers two ways, plus the Euler characteristic.
    Betti { fan: PathBuf },
    /// Intersection number of rank-many divisors on a fan.
    Intersect {
        fan: PathBuf,
        /// Comma-separated divisor files, exactly rank many.
        #[arg(long, value_delimiter = ',', required = true)]
        divisors: Vec<PathBuf>,
    },
    /// Check the fibered self-intersection identity two ways.
    BkkCheck {
        twist: PathBuf,
        fiber_divisor: PathBuf,
        base_divisor: PathBuf,
    },
    /// Chern class report: Euler characteristic and reduced class data.
    Chern { fan: PathBuf },
    /// Equivariant approximation consistency report.
    Equivariant {
        fan: PathBuf,
        /// Approximation order.
        #[arg(long)]
        m: usize,
        /// Highest reported degree (defaults to the bundle rank plus one).
        #[arg(long)]
        max_degree: Option<usize>,
    },
}

enum Failure {
    /// Inputs parsed but failed validation or a precondition: exit 1 with a
    /// report on standard output.
    Invalid(String),
    /// Unreadable or unparsable input: exit 2 with a diagnostic on standard
    /// error.
    Malformed(String),
}

impl From<toric::Error> for Failure {
    fn from(e: toric::Error) -> Failure {
        match e {
            toric::Error::Malformed(m) => Failure::Malformed(m),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_fan(path: &Path) -> Result<Fan, Failure> {
    Ok(json::fan_from_str(&read(path)?)?)
}

/// Parse and fully validate a fan, demanding smooth completeness when the
/// downstream computation needs it.
fn load_validated_fan(path: &Path, needs_smooth_complete: bool) -> Result<Fan, Failure> {
    let fan = load_fan(path)?;
    let report = fan.validate();
    if !report.is_valid {
        return Err(Failure::Invalid(format!(
            "fan {} is invalid: {}",
            path.display(),
            report.violations.join("; ")
        )));
    }
    if needs_smooth_complete && !(report.is_smooth && report.is_complete) {
        return Err(Failure::Invalid(format!(
            "fan {} must be smooth and complete for this computation",
            path.display()
        )));
    }
    Ok(fan)
}

fn raw(s: String) -> Box<RawValue> {
    RawValue::from_string(s).expect("serializer output is valid JSON")
}

fn rat_str(r: &Rat) -> String {
    json::rat_string(r)
}

#[derive(Serialize)]
struct ValidateReport {
    is_valid: bool,
    is_smooth: bool,
    is_complete: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct SplitReport {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<Vec<json::JsonInt>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct BettiReport {
    betti: Vec<usize>,
    h_vector: Vec<usize>,
    euler_characteristic: json::JsonInt,
    maximal_cones: usize,
}

#[derive(Serialize)]
struct IntersectReport {
    intersection_number: String,
}

#[derive(Serialize)]
struct ProofIdentityDoc {
    minkowski_volume: String,
    integrated_volume: String,
    equal: bool,
}

#[derive(Serialize)]
struct BkkReportDoc {
    lhs: String,
    rhs: String,
    equal: bool,
    proof_identity: Option<ProofIdentityDoc>,
}

#[derive(Serialize)]
struct ChernReport {
    euler_characteristic: json::JsonInt,
    /// Degree of the top power of the first Chern class.
    c1_top_power_degree: String,
    /// Per-degree coefficients of the Chern classes in the reduced monomial
    /// basis of each degree.
    chern_classes: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct EquivariantReport {
    m: usize,
    truncated_dims: Vec<usize>,
    sr_coeffs: Vec<usize>,
    borel_betti: Vec<usize>,
    consistent: bool,
}

/// Run a command, producing the JSON document and the process exit code.
fn run(command: &Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Validate { fan } => {
            let fan = load_fan(fan)?;
            let report = fan.validate();
            let doc = ValidateReport {
                is_valid: report.is_valid,
                is_smooth: report.is_smooth,
                is_complete: report.is_complete,
                violations: report.violations,
            };
            let code = u8::from(!doc.is_valid);
            Ok((serde_json::to_string(&doc).unwrap(), code))
        }
        Command::Twist { twist } => {
            let data = json::twist_from_str(&read(twist)?)?;
            for (name, fan) in [("base", data.base()), ("fiber", data.fiber())] {
                let report = fan.validate();
                if !report.is_valid {
                    return Err(Failure::Invalid(format!(
                        "{name} fan is invalid: {}",
                        report.violations.join("; ")
                    )));
                }
            }
            Ok((json::fan_to_string(&data.twisted_product()), 0))
        }
        Command::Split { fan, base_coords } => {
            let fan = load_validated_fan(fan, false)?;
            match detect_fibered(&fan, base_coords) {
                Ok(data) => {
                    let doc = SplitReport {
                        ok: true,
                        base: Some(raw(json::fan_to_string(data.base()))),
                        fiber: Some(raw(json::fan_to_string(data.fiber()))),
                        phi: Some(
                            data.phi()
                                .values()
                                .iter()
                                .map(|v| v.0.iter().cloned().map(json::JsonInt).collect())
                                .collect(),
                        ),
                        reason: None,
                    };
                    Ok((serde_json::to_string(&doc).unwrap(), 0))
                }
                Err(failure) => {
                    let doc = SplitReport {
                        ok: false,
                        base: None,
                        fiber: None,
                        phi: None,
                        reason: Some(failure.reason),
                    };
                    Ok((serde_json::to_string(&doc).unwrap(), 1))
                }
            }
        }
        Command::Betti { fan } => {
            let fan = load_validated_fan(fan, true)?;
            let ring = CohomologyRing::new(&fan)?;
            let doc = BettiReport {
                betti: ring.betti_numbers(),
                h_vector: h_vector(&fan),
                euler_characteristic: json::JsonInt(ring.euler_characteristic()?),
                maximal_cones: fan.maximal_cones().len(),
            };
            Ok((serde_json::to_string(&doc).unwrap(), 0))
        }
        Command::Intersect { fan, divisors } => {
            let fan = load_validated_fan(fan, true)?;
            let divisors = divisors
                .iter()
                .map(|path| Ok(json::divisor_from_str(&fan, &read(path)?)?))
                .collect::<Result<Vec<Divisor>, Failure>>()?;
            let ring = CohomologyRing::new(&fan)?;
            let value = intersection_number_in(&ring, &divisors)?;
            let doc = IntersectReport {
                intersection_number: rat_str(&value),
            };
            Ok((serde_json::to_string(&doc).unwrap(), 0))
        }
        Command::BkkCheck {
            twist,
            fiber_divisor,
            base_divisor,
        } => {
            let data = json::twist_from_str(&read(twist)?)?;
            for (name, fan) in [("base", data.base()), ("fiber", data.fiber())] {
                let report = fan.validate();
                if !(report.is_valid && report.is_smooth && report.is_complete) {
                    return Err(Failure::Invalid(format!(
                        "{name} fan must be valid, smooth and complete"
                    )));
                }
            }
            let fiber_divisor = json::divisor_from_str(data.fiber(), &read(fiber_divisor)?)?;
            let base_divisor = json::divisor_from_str(data.base(), &read(base_divisor)?)?;
            let report = bkk_check(&data, &fiber_divisor, &base_divisor)?;
            let doc = BkkReportDoc {
                lhs: rat_str(&report.lhs),
                rhs: rat_str(&report.rhs),
                equal: report.equal,
                proof_identity: report.proof_identity.map(|p| ProofIdentityDoc {
                    minkowski_volume: rat_str(&p.minkowski_volume),
                    integrated_volume: rat_str(&p.integrated_volume),
                    equal: p.equal,
                }),
            };
            Ok((serde_json::to_string(&doc).unwrap(), 0))
        }
        Command::Chern { fan } => {
            let fan = load_validated_fan(fan, true)?;
            let ring = CohomologyRing::new(&fan)?;
            let chern = ring.total_chern();
            let c1 = &chern[1.min(ring.top_degree())];
            let c1_power = ring.power(c1, ring.top_degree());
            let doc = ChernReport {
                euler_characteristic: json::JsonInt(ring.euler_characteristic()?),
                c1_top_power_degree: rat_str(&ring.degree_of_top_class(&c1_power)?),
                chern_classes: chern
                    .iter()
                    .map(|c| c.coefficients.iter().map(rat_str).collect())
                    .collect(),
            };
            Ok((serde_json::to_string(&doc).unwrap(), 0))
        }
        Command::Equivariant { fan, m, max_degree } => {
            let fan = load_validated_fan(fan, true)?;
            let report = equivariant_consistency_check(&fan, *m)?;
            let d_max = max_degree.unwrap_or(report.truncated_dims.len() - 1);
            let truncated_dims = if d_max + 1 == report.truncated_dims.len() {
                report.truncated_dims
            } else {
                toric::equivariant::truncated_quotient_dims(&fan, *m, d_max)
            };
            let doc = EquivariantReport {
                m: report.m,
                truncated_dims,
                sr_coeffs: toric::equivariant::sr_hilbert_coeffs(&fan, d_max),
                borel_betti: report.borel_betti,
                consistent: report.consistent,
            };
            Ok((serde_json::to_string(&doc).unwrap(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((document, code)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, format!("{document}\n")) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                println!("{document}");
            }
            ExitCode::from(code)
        }
        Err(Failure::Invalid(message)) => {
            let doc = serde_json::json!({ "error": message });
            println!("{doc}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
