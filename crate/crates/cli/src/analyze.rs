//! `analyze`: full leakage report for one mechanism under one prior.

use std::path::Path;

use pml_core::disclosure::detect_singling_out;
use pml_core::leakage::{epsilon_max, leakage_capacity, pml_profile};
use pml_core::{Joint, Pmf};

use crate::config::{AnalysisConfig, OutputFormat};
use crate::files::{read_json, MechanismFile, PriorFile};
use crate::fmt::{fmt_float, fmt_leakage, json_float};

pub fn run(
    mechanism_path: &Path,
    prior_path: &Path,
    threshold_override: Option<f64>,
    config: &AnalysisConfig,
    format: OutputFormat,
) -> Result<i32, String> {
    let mechanism: MechanismFile = read_json(mechanism_path)?;
    let prior_file: PriorFile = read_json(prior_path)?;
    let channel = mechanism.to_channel()?;
    let prior: Pmf = prior_file.to_pmf()?;
    let joint = Joint::new(channel.clone(), prior.clone()).map_err(|e| e.to_string())?;

    let profile = pml_profile(&joint);
    let capacity = leakage_capacity(&channel);
    let eps_max = epsilon_max(&prior).map_err(|e| e.to_string())?;
    let threshold = threshold_override.unwrap_or(config.singling_out_threshold);
    let singling = detect_singling_out(&channel, &prior, threshold).map_err(|e| e.to_string())?;

    match format {
        OutputFormat::Text => {
            println!(
                "mechanism: {} inputs, {} outputs",
                channel.input_len(),
                channel.output_len()
            );
            println!("prior: {} symbols", prior.len());
            println!("pml profile:");
            for (outcome, value) in profile.outcomes.iter().zip(&profile.values) {
                println!("  {outcome}: {}", fmt_leakage(*value));
            }
            println!(
                "sup pml: {} (outcome {})",
                fmt_leakage(profile.sup),
                profile.witness
            );
            println!("leakage capacity: {}", fmt_leakage(capacity));
            println!("epsilon_max: {}", fmt_float(eps_max));
            println!(
                "singling out (threshold {}): {}; worst outcome {}, posterior mass {}, min-entropy {}",
                fmt_float(threshold),
                if singling.disclosed { "disclosed" } else { "not disclosed" },
                singling.witness.outcome,
                fmt_float(singling.witness.posterior_mass),
                fmt_float(singling.witness.min_entropy),
            );
        }
        OutputFormat::Json => {
            let profile_map: serde_json::Map<String, serde_json::Value> = profile
                .outcomes
                .iter()
                .zip(&profile.values)
                .map(|(o, &v)| (o.clone(), json_float(v)))
                .collect();
            let report = serde_json::json!({
                "pml_profile": profile_map,
                "sup_pml": json_float(profile.sup),
                "sup_witness": profile.witness,
                "leakage_capacity": json_float(capacity),
                "epsilon_max": json_float(eps_max),
                "singling_out": {
                    "threshold": json_float(threshold),
                    "disclosed": singling.disclosed,
                    "attained_zero": singling.attained_zero,
                    "witness_outcome": singling.witness.outcome,
                    "witness_value": singling.witness.attribute_value,
                    "posterior_mass": json_float(singling.witness.posterior_mass),
                    "min_entropy": json_float(singling.witness.min_entropy),
                },
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        OutputFormat::Csv => {
            println!("quantity,outcome,value");
            for (outcome, value) in profile.outcomes.iter().zip(&profile.values) {
                println!("pml,{outcome},{}", fmt_leakage(*value));
            }
            println!("sup_pml,{},{}", profile.witness, fmt_leakage(profile.sup));
            println!("leakage_capacity,,{}", fmt_leakage(capacity));
            println!("epsilon_max,,{}", fmt_float(eps_max));
            println!(
                "singling_out_min_entropy,{},{}",
                singling.witness.outcome,
                fmt_float(singling.witness.min_entropy)
            );
            println!("singling_out_disclosed,,{}", singling.disclosed);
        }
    }
    Ok(0)
}
