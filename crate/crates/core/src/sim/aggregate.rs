use super::{Algorithm, Alphabet, Scenario, TrialRecord};

/// Per `(algorithm, sweep point)` sample moments.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRecord {
    pub scenario: Scenario,
    pub alphabet: Alphabet,
    pub algorithm: Algorithm,
    pub sweep_point: usize,
    pub count: usize,
    pub mean_sinr_db: f64,
    pub mean_loss_db: f64,
    /// Sample variance (`n - 1` denominator); `0` when `count == 1`.
    pub var_loss_db: f64,
    /// `false` when `count == 1` and `var_loss_db` is a placeholder.
    pub variance_defined: bool,
    pub mean_candidates: Option<f64>,
    pub mean_nodes: Option<f64>,
}

#[derive(Default)]
struct Running {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }
}

/// Groups records by `(algorithm, sweep point)` in order of first
/// appearance and accumulates them in record order.
pub fn aggregate(records: &[TrialRecord]) -> Vec<AggregateRecord> {
    struct Group {
        key: (Algorithm, usize),
        first: usize,
        loss: Running,
        sinr: Running,
        candidates: Running,
        nodes: Running,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (idx, r) in records.iter().enumerate() {
        let key = (r.algorithm, r.sweep_point);
        let pos = match groups.iter().position(|g| g.key == key) {
            Some(p) => p,
            None => {
                groups.push(Group {
                    key,
                    first: idx,
                    loss: Running::default(),
                    sinr: Running::default(),
                    candidates: Running::default(),
                    nodes: Running::default(),
                });
                groups.len() - 1
            }
        };
        let g = &mut groups[pos];
        g.loss.push(r.loss_db);
        g.sinr.push(r.sinr_db);
        if let Some(c) = r.candidates {
            g.candidates.push(c as f64);
        }
        if let Some(n) = r.nodes {
            g.nodes.push(n as f64);
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let first = &records[g.first];
            let n = g.loss.n;
            AggregateRecord {
                scenario: first.scenario,
                alphabet: first.alphabet,
                algorithm: g.key.0,
                sweep_point: g.key.1,
                count: n,
                mean_sinr_db: g.sinr.mean,
                mean_loss_db: g.loss.mean,
                var_loss_db: if n > 1 { g.loss.m2 / (n - 1) as f64 } else { 0.0 },
                variance_defined: n > 1,
                mean_candidates: (g.candidates.n > 0).then_some(g.candidates.mean),
                mean_nodes: (g.nodes.n > 0).then_some(g.nodes.mean),
            }
        })
        .collect()
}
