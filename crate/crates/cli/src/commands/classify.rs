use frw_core::model::{classify, degenerate_index, Family};
use frw_core::validate::physical_pieces;
use serde::Serialize;

use super::solve::branch_label;
use crate::args::{ClassifyArgs, Format};
use crate::config::{build_params, RunConfig};
use crate::error::CliError;
use crate::output::{self, num};

#[derive(Debug, Serialize)]
pub struct ClassifyRecord {
    pub family: Family,
    pub discriminant: f64,
    pub lambda_scale: f64,
    pub degenerate_n: Option<i32>,
    pub closed_form: bool,
    pub methods: Vec<&'static str>,
    pub notes: Vec<String>,
}

fn family_note(f: Family) -> &'static str {
    match f {
        Family::RadiationLambdaLargeSinh => "curved radiation, Delta < 0: sinh form",
        Family::RadiationLambdaCritical => "curved radiation, Delta = 0: exponential form",
        Family::RadiationLambdaSmallCosh => "curved radiation, Delta > 0 with Lambda > 0: cosh form",
        Family::RadiationLambdaNegativeTrig => "curved radiation, Lambda < 0: trigonometric form",
        Family::FlatRadiationSinh => "flat radiation, Lambda > 0",
        Family::FlatRadiationTrig => "flat radiation, Lambda < 0",
        Family::ZeroLambdaFlatPowerLaw => "flat, Lambda = 0: power law",
        Family::ZeroLambdaDeSitterFlat => "flat vacuum, Lambda = 0: exponential",
        Family::ZeroLambdaCurvedRadiation => "curved radiation, Lambda = 0",
        Family::ZeroLambdaCurvedDust => "curved dust, Lambda = 0: implicit relation",
        Family::ZeroLambdaCurvedVacuum => "curved vacuum, Lambda = 0",
        Family::HypergeometricGeneral => "Lambda = 0, general gamma_bar: hypergeometric t(a)",
        Family::LogarithmicDegenerate => "gamma_bar = 1/(2n+1): logarithmic case, numerical methods only",
        Family::NumericalOnly => "no closed form: ODE and quadrature only",
    }
}

pub fn run(args: &ClassifyArgs) -> Result<(), CliError> {
    let file = RunConfig::load_opt(args.config.as_ref())?;
    let params = build_params(&args.params, &file)?;
    let regime = classify(&params);
    let family = regime.family;
    let mut methods = Vec::new();
    if family.has_closed_form() {
        methods.push("closed");
    }
    if family == Family::HypergeometricGeneral {
        methods.push("hypergeometric");
    }
    methods.extend(["ode", "quadrature"]);
    let mut notes = vec![family_note(family).to_string()];
    if family.has_closed_form() {
        for piece in physical_pieces(&params) {
            let w = piece.window;
            let label = if family.is_curved_radiation() {
                format!("branch {} ", branch_label(piece.form.branch()))
            } else {
                String::new()
            };
            notes.push(format!("{label}sampled on [{}, {}]", num(w.t_min), num(w.t_max)));
        }
    }
    let record = ClassifyRecord {
        family,
        discriminant: regime.discriminant,
        lambda_scale: regime.lambda_scale,
        degenerate_n: degenerate_index(params.gamma_bar()),
        closed_form: family.has_closed_form(),
        methods,
        notes,
    };
    let text = match args.output.format.or(file.format).unwrap_or(Format::Json) {
        Format::Json => output::to_json(&record)?,
        Format::Csv => {
            let n = record.degenerate_n.map(|n| n.to_string()).unwrap_or_default();
            format!(
                "family,discriminant,lambda_scale,degenerate_n,closed_form,methods,notes\n{},{},{},{},{},{},\"{}\"\n",
                record.family,
                num(record.discriminant),
                num(record.lambda_scale),
                n,
                record.closed_form,
                record.methods.join(";"),
                record.notes.join("; ").replace('"', "'"),
            )
        }
    };
    output::emit(args.output.out.clone().or(file.out).as_deref(), &text)
}
