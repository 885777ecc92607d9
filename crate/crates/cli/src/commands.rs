//! The subcommands, as functions from parsed arguments to printed output.
//! Matrix output is itself a valid matrix file; scalar diagnostics follow
//! as `#` comment lines.

use std::fmt::Write as _;
use std::path::Path;

use sqrtx::{
    assert_spd, derivative_stack, principal_sqrt, report, GateVerdict, NormKind, QuadratureSpec,
};

use crate::matrix_file::{format_matrix, read_matrix};
use crate::verify::{self, RunConfig};
use crate::{CliError, Outcome};

/// Environment variable overriding the Gauss-Legendre nodes per panel used
/// by the quadrature oracles.
pub const QUAD_NODES_VAR: &str = "SQRTX_QUAD_NODES";

pub fn sqrt(a: &Path) -> Result<Outcome, CliError> {
    let a = assert_spd(&read_matrix(a)?)?;
    let s = principal_sqrt(&a);
    let residual = (&s.as_sym().square() - a.as_sym()).frobenius();
    let mut stdout = format_matrix(s.as_sym());
    let _ = writeln!(stdout, "# residual {:.16e}", residual);
    Ok(Outcome {
        stdout,
        exit_code: 0,
    })
}

pub fn frechet(a: &Path, h: &Path, order: usize) -> Result<Outcome, CliError> {
    let a = assert_spd(&read_matrix(a)?)?;
    let h = read_matrix(h)?;
    let stack = derivative_stack(&a, &h, order)?;
    let mut stdout = String::new();
    for k in 1..=order {
        let _ = writeln!(stdout, "# derivative {k}");
        stdout.push_str(&format_matrix(&stack.derivative(k)));
    }
    let _ = writeln!(
        stdout,
        "# sylvester_residual {:.16e}",
        stack.first_order_residual()
    );
    Ok(Outcome {
        stdout,
        exit_code: 0,
    })
}

/// Exit code `0` if the bound holds, `4` if it does not, `5` when the
/// perturbation gate is not strict (the report is printed either way).
pub fn taylor(a: &Path, h: &Path, order: usize, kind: NormKind) -> Result<Outcome, CliError> {
    let a = read_matrix(a)?;
    let h = read_matrix(h)?;
    assert_spd(&a)?;
    let rep = report(&a, &h, order, kind)?;
    let exit_code = match (rep.gate.verdict, rep.bound_satisfied) {
        (GateVerdict::Strict, Some(true)) => 0,
        (GateVerdict::Strict, _) => 4,
        _ => 5,
    };
    Ok(Outcome {
        stdout: rep.to_json() + "\n",
        exit_code,
    })
}

pub fn verify(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate().map_err(CliError::Usage)?;
    let summary = verify::run(config)?;
    Ok(Outcome {
        stdout: summary.to_json() + "\n",
        exit_code: if summary.failures == 0 { 0 } else { 1 },
    })
}

/// Applies a `SQRTX_QUAD_NODES` value to both quadrature oracles.
pub fn apply_quad_nodes(config: &mut RunConfig, value: Option<&str>) -> Result<(), CliError> {
    let Some(value) = value else {
        return Ok(());
    };
    let nodes: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{QUAD_NODES_VAR}: not a count: `{value}`")))?;
    config.lyapunov = QuadratureSpec::LYAPUNOV.with_nodes(nodes)?;
    config.resolvent = QuadratureSpec::RESOLVENT.with_nodes(nodes)?;
    Ok(())
}

