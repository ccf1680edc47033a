//! Fixed mathematical constants used by every coefficient table.

use std::sync::LazyLock;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

pub const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub pi: f64,
    pub log_2pi: f64,
    pub log_4pi: f64,
    pub log_8pi: f64,
}

static CONSTANTS: LazyLock<Constants> = LazyLock::new(|| Constants {
    euler_gamma: EULER_GAMMA,
    pi: PI,
    log_2pi: (2.0 * PI).ln(),
    log_4pi: (4.0 * PI).ln(),
    log_8pi: (8.0 * PI).ln(),
});

impl Constants {
    pub fn get() -> &'static Constants {
        &CONSTANTS
    }
}
