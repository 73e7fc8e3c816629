use crate::error::Violation;

/// Collects violations while walking a description.
#[derive(Debug, Default)]
pub(crate) struct Checker {
    pub(crate) violations: Vec<Violation>,
}

impl Checker {
    pub(crate) fn fail(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation::new(path, message));
    }

    pub(crate) fn ensure(&mut self, cond: bool, path: impl Into<String>, message: impl Into<String>) {
        if !cond {
            self.fail(path, message);
        }
    }

    pub(crate) fn positive(&mut self, path: &str, field: &str, value: f64) {
        if !(value.is_finite() && value > 0.0) {
            self.fail(join(path, field), format!("must be positive, got {value}"));
        }
    }

    pub(crate) fn positive_int(&mut self, path: &str, field: &str, value: u64) {
        if value == 0 {
            self.fail(join(path, field), "must be at least 1");
        }
    }

    pub(crate) fn fraction_closed(&mut self, path: &str, field: &str, value: f64) {
        if !(0.0..=1.0).contains(&value) {
            self.fail(join(path, field), format!("must be in [0, 1], got {value}"));
        }
    }

    pub(crate) fn fraction_half_open(&mut self, path: &str, field: &str, value: f64) {
        if !(value > 0.0 && value <= 1.0) {
            self.fail(join(path, field), format!("must be in (0, 1], got {value}"));
        }
    }

    pub(crate) fn nonempty(&mut self, path: &str, field: &str, value: &str) {
        if value.trim().is_empty() {
            self.fail(join(path, field), "must not be empty");
        }
    }
}

pub(crate) fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

pub(crate) fn index(path: &str, field: &str, i: usize) -> String {
    format!("{}[{i}]", join(path, field))
}
