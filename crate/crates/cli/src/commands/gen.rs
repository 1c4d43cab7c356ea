use sparsefair_core::synthetic::{
    fit_simple_ols, gen_multigroup_cls, gen_twogroup_cls, gen_twogroup_reg_with_noise, REG_NOISE_VARIANCES,
};

use crate::args::{GenArgs, ScenarioArg};
use crate::error::{CliError, CliResult};
use crate::output;

/// CSV for a scenario: `y_true,y_pred,group`, plus `x` for regression.
///
/// Regression predictions come from a one-feature least-squares fit on the
/// pooled sample.
pub fn scenario_csv(args: &GenArgs) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match args.scenario {
        ScenarioArg::MultigroupCls | ScenarioArg::TwogroupCls => {
            let sc = if args.scenario == ScenarioArg::MultigroupCls {
                gen_multigroup_cls(args.n, args.n_groups, args.seed)?
            } else {
                gen_twogroup_cls(args.n, args.seed)?
            };
            let d = &sc.data;
            w.write_record(["y_true", "y_pred", "group"])?;
            for i in 0..d.len() {
                w.write_record([
                    d.classes()[d.y_true()[i]].as_str(),
                    d.classes()[d.y_pred()[i]].as_str(),
                    &d.groups()[i].to_string(),
                ])?;
            }
        }
        ScenarioArg::TwogroupReg => {
            let noise = match args.noise_var.as_deref() {
                None => REG_NOISE_VARIANCES,
                Some([a, b]) => [*a, *b],
                Some(other) => {
                    return Err(CliError::Usage(format!(
                        "--noise-var takes two variances, got {}",
                        other.len()
                    )))
                }
            };
            let sc = gen_twogroup_reg_with_noise(args.n, noise, args.seed)?;
            let (a, b) = fit_simple_ols(&sc.x, sc.data.y_true())?;
            w.write_record(["y_true", "y_pred", "group", "x"])?;
            for (i, &x) in sc.x.iter().enumerate() {
                w.write_record([
                    sc.data.y_true()[i].to_string(),
                    (a + b * x).to_string(),
                    sc.data.groups()[i].to_string(),
                    x.to_string(),
                ])?;
            }
        }
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

pub fn run(args: &GenArgs) -> CliResult<i32> {
    let name = match args.scenario {
        ScenarioArg::MultigroupCls => "multigroup_cls.csv",
        ScenarioArg::TwogroupCls => "twogroup_cls.csv",
        ScenarioArg::TwogroupReg => "twogroup_reg.csv",
    };
    output::emit(args.output.as_deref(), name, &scenario_csv(args)?)?;
    Ok(0)
}
