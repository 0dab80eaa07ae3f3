use frw_core::specfun::hyp2f1;

use crate::args::Hyp2f1Args;
use crate::error::CliError;

/// Fixed 15 digits after the point.
pub fn format_value(v: f64) -> String {
    format!("{v:.15}")
}

pub fn run(args: &Hyp2f1Args) -> Result<(), CliError> {
    let v = hyp2f1(args.a, args.b, args.c, args.x)?;
    println!("{}", format_value(v));
    Ok(())
}
