use super::GroundTruth;
use crate::detect::DetectionReport;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    TruePositive,
    FalsePositive,
    TrueNegative,
    FalseNegative,
}

/// Agreement between one report and the ground truth of the same image.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub outcome: Outcome,
    pub parasites: usize,
    /// Parasites with at least one flagged contour centroid inside them.
    pub matched_parasites: usize,
    pub flagged: usize,
    /// Flagged contours whose centroid lies inside some parasite.
    pub matched_detections: usize,
}

impl Metrics {
    pub fn sensitivity(&self) -> Option<f64> {
        (self.parasites > 0).then(|| self.matched_parasites as f64 / self.parasites as f64)
    }
}

pub fn score<T: Scalar>(report: &DetectionReport<T>, gt: &GroundTruth) -> Metrics {
    let parasites: Vec<_> = gt.parasites().collect();
    let mut hit = vec![false; parasites.len()];
    let mut matched_detections = 0;
    let mut flagged = 0;
    for c in report.flagged() {
        flagged += 1;
        let x = (c.centroid[0].as_f64() + 0.5).floor();
        let y = (c.centroid[1].as_f64() + 0.5).floor();
        if x < 0.0 || y < 0.0 {
            continue;
        }
        let mut matched = false;
        for (i, p) in parasites.iter().enumerate() {
            if p.contains(x as usize, y as usize) {
                hit[i] = true;
                matched = true;
            }
        }
        matched_detections += matched as usize;
    }
    let outcome = match (report.plasmodium_found, !parasites.is_empty()) {
        (true, true) => Outcome::TruePositive,
        (true, false) => Outcome::FalsePositive,
        (false, false) => Outcome::TrueNegative,
        (false, true) => Outcome::FalseNegative,
    };
    Metrics {
        outcome,
        parasites: parasites.len(),
        matched_parasites: hit.iter().filter(|&&h| h).count(),
        flagged,
        matched_detections,
    }
}

/// Image-level confusion tally.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub true_positive: usize,
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
}

impl Confusion {
    pub fn add(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::TruePositive => self.true_positive += 1,
            Outcome::FalsePositive => self.false_positive += 1,
            Outcome::TrueNegative => self.true_negative += 1,
            Outcome::FalseNegative => self.false_negative += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }

    pub fn accuracy(&self) -> f64 {
        (self.true_positive + self.true_negative) as f64 / self.total() as f64
    }

    pub fn sensitivity(&self) -> f64 {
        self.true_positive as f64 / (self.true_positive + self.false_negative) as f64
    }

    pub fn specificity(&self) -> f64 {
        self.true_negative as f64 / (self.true_negative + self.false_positive) as f64
    }
}

impl FromIterator<Outcome> for Confusion {
    fn from_iter<I: IntoIterator<Item = Outcome>>(iter: I) -> Self {
        let mut c = Confusion::default();
        for o in iter {
            c.add(o);
        }
        c
    }
}
