use std::io;
use std::path::Path;

use super::{manual_scenarios, sample_scenario, RebalanceScenario, SimulationParams};
use crate::error::{AllocError, Result};
use crate::pipeline::PipelineOutcome;

pub const INPUT_COLUMNS: [&str; 8] = [
    "minGlobalWeight",
    "maxGlobalWeight",
    "BridgeCapacity_PQ",
    "BridgeCapacity_QP",
    "TBDAmount_P",
    "CurrentAmount_P",
    "TBDAmount_Q",
    "CurrentAmount_Q",
];

pub const PRIMARY_COLUMNS: [&str; 12] = [
    "TransferAmount_PQ_Delta",
    "TransferAmount_QP_Delta",
    "TransferAmount_PQ",
    "TransferAmount_QP",
    "BridgeStretch",
    "collectDeployDiff",
    "outsideBand_P",
    "outsideBand_Q",
    "maxSend_P",
    "maxSend_Q",
    "maxRecieve_P",
    "maxRecieve_Q",
];

pub const INTERMEDIATE_COLUMNS: [&str; 16] = [
    "TBD+Current_P",
    "TBD+Current_Q",
    "outsideBand_PQ_D",
    "outsideBand_QP_D",
    "outsideBand_Positive_P",
    "outsideBand_Positive_Q",
    "transfer_PQ_First_D",
    "transfer_PQ_First",
    "transfer_PQ_Second",
    "transfer_QP_First_D",
    "transfer_QP_First",
    "transfer_QP_Second",
    "Total-MinCapacity_P",
    "Total-MaxCapacity_P",
    "Total-MinCapacity_Q",
    "Total-MaxCapacity_Q",
];

/// One table row: the scenario and what the pipeline made of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    /// 1-based row number; manual rows come first.
    pub row: usize,
    pub scenario: RebalanceScenario,
    pub outcome: std::result::Result<PipelineOutcome, AllocError>,
}

impl ScenarioRow {
    pub fn input_values(&self) -> [f64; 8] {
        let s = &self.scenario;
        [
            s.mean_raw_min(),
            s.mean_raw_max(),
            s.bridge.cap_pq,
            s.bridge.cap_qp,
            s.p.tbd,
            s.p.current_total,
            s.q.tbd,
            s.q.current_total,
        ]
    }
}

pub fn primary_values(o: &PipelineOutcome) -> [f64; 12] {
    let (ap, aq, d) = (&o.assessment_p, &o.assessment_q, &o.decision);
    [
        d.delta_pq,
        d.delta_qp,
        d.simple_pq,
        d.simple_qp,
        o.stretch.raw_stretch,
        o.stretch.collect_deploy_diff,
        ap.outside_band,
        aq.outside_band,
        ap.max_send,
        aq.max_send,
        ap.max_receive,
        aq.max_receive,
    ]
}

pub fn intermediate_values(o: &PipelineOutcome) -> [f64; 16] {
    let (ap, aq, pq, qp) = (&o.assessment_p, &o.assessment_q, &o.terms_pq, &o.terms_qp);
    [
        ap.total_with_tbd,
        aq.total_with_tbd,
        pq.comparison,
        qp.comparison,
        pq.indicator,
        qp.indicator,
        pq.first_delta,
        pq.first_simple,
        pq.second,
        qp.first_delta,
        qp.first_simple,
        qp.second,
        ap.total_with_tbd - ap.min_capacity,
        ap.total_with_tbd - ap.max_capacity,
        aq.total_with_tbd - aq.min_capacity,
        aq.total_with_tbd - aq.max_capacity,
    ]
}

/// Manual rows followed by `n_scenarios` random rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub params: SimulationParams,
    pub rows: Vec<ScenarioRow>,
}

/// Evaluates the manual scenarios, then random scenarios `0..n_scenarios`.
///
/// A row whose pipeline fails keeps its error; the batch carries on.
pub fn run_batch(params: &SimulationParams) -> Result<Batch> {
    params.validate()?;
    let cfg = params.pipeline_config();
    let scenarios = manual_scenarios()
        .into_iter()
        .chain((0..params.n_scenarios as u64).map(|i| sample_scenario(params, i)));
    let rows = scenarios
        .enumerate()
        .map(|(k, scenario)| ScenarioRow {
            row: k + 1,
            outcome: scenario.run(&cfg),
            scenario,
        })
        .collect();
    Ok(Batch {
        params: params.clone(),
        rows,
    })
}

pub const INPUTS_FILE: &str = "inputs.csv";
pub const PRIMARY_FILE: &str = "transfers.csv";
pub const INTERMEDIATE_FILE: &str = "intermediate.csv";

impl Batch {
    pub fn inputs_csv(&self, round: bool) -> String {
        self.table(&INPUT_COLUMNS, round, |row| Some(row.input_values().to_vec()))
    }

    pub fn primary_csv(&self, round: bool) -> String {
        self.table(&PRIMARY_COLUMNS, round, |row| {
            row.outcome.as_ref().ok().map(|o| primary_values(o).to_vec())
        })
    }

    pub fn intermediate_csv(&self, round: bool) -> String {
        self.table(&INTERMEDIATE_COLUMNS, round, |row| {
            row.outcome.as_ref().ok().map(|o| intermediate_values(o).to_vec())
        })
    }

    /// Writes the three tables into `dir` and returns their paths.
    pub fn write_tables(&self, dir: &Path, round: bool) -> io::Result<[std::path::PathBuf; 3]> {
        std::fs::create_dir_all(dir)?;
        let paths = [
            dir.join(INPUTS_FILE),
            dir.join(PRIMARY_FILE),
            dir.join(INTERMEDIATE_FILE),
        ];
        std::fs::write(&paths[0], self.inputs_csv(round))?;
        std::fs::write(&paths[1], self.primary_csv(round))?;
        std::fs::write(&paths[2], self.intermediate_csv(round))?;
        Ok(paths)
    }

    fn table(
        &self,
        columns: &[&str],
        round: bool,
        values: impl Fn(&ScenarioRow) -> Option<Vec<f64>>,
    ) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["Scenario", "Source"]
            .into_iter()
            .chain(columns.iter().copied())
            .chain(["Status"]);
        w.write_record(header).expect("in-memory write");
        for row in &self.rows {
            let mut record = vec![row.row.to_string(), row.scenario.provenance.to_string()];
            match values(row) {
                Some(vals) => record.extend(vals.into_iter().map(|v| format_amount(v, round))),
                None => record.extend(columns.iter().map(|_| String::new())),
            }
            record.push(match &row.outcome {
                Ok(_) => "ok".to_string(),
                Err(e) => e.to_string(),
            });
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush to Vec")).expect("utf-8 fields")
    }
}

/// Shortest round-trip representation, or whole units when `round` is set.
pub fn format_amount(v: f64, round: bool) -> String {
    if round {
        format!("{}", v.round() + 0.0)
    } else {
        format!("{}", v + 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manual_only_batch() {
        let params = SimulationParams {
            n_scenarios: 0,
            ..Default::default()
        };
        let batch = run_batch(&params).unwrap();
        assert_eq!(batch.rows.len(), 15);
        assert!(batch.rows.iter().all(|r| r.outcome.is_ok()), "{:#?}", batch.rows.iter().filter(|r| r.outcome.is_err()).collect::<Vec<_>>());
    }

    #[test]
    fn header_names() {
        let batch = run_batch(&SimulationParams {
            n_scenarios: 1,
            ..Default::default()
        })
        .unwrap();
        let first = batch.intermediate_csv(false).lines().next().unwrap().to_string();
        assert!(first.starts_with("Scenario,Source,TBD+Current_P,"));
        assert!(first.contains("Total-MinCapacity_Q"));
        assert!(first.ends_with(",Status"));
        assert_eq!(batch.primary_csv(false).lines().count(), 17);
    }

    #[test]
    fn rounding() {
        assert_eq!(format_amount(1234.6, true), "1235");
        assert_eq!(format_amount(-0.3, true), "0");
        assert_eq!(format_amount(0.1, false), "0.1");
        assert_eq!(format_amount(-0.0, false), "0");
    }
}
