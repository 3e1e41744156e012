//! Exponential standard atmosphere: density decays with a fixed scale
//! height, speed of sound from a small piecewise-constant altitude table.
//! Plausible magnitudes are all the estimator needs; it is calibrated
//! against the same model it inverts.

/// Sea-level density, kg/m^3.
pub const RHO_0: f64 = 1.225;
/// Sea-level ambient pressure, Pa.
pub const P_0: f64 = 101_325.0;
/// Density/pressure scale height, m.
pub const SCALE_HEIGHT: f64 = 7_500.0;

/// Speed of sound table: (altitude floor m, a m/s); piecewise constant.
const SOUND_TABLE: [(f64, f64); 5] = [
    (0.0, 340.3),
    (11_000.0, 295.1),
    (20_000.0, 295.1),
    (32_000.0, 303.1),
    (47_000.0, 329.8),
];

pub fn density(altitude: f64) -> f64 {
    RHO_0 * (-altitude / SCALE_HEIGHT).exp()
}

pub fn ambient_pressure(altitude: f64) -> f64 {
    P_0 * (-altitude / SCALE_HEIGHT).exp()
}

pub fn speed_of_sound(altitude: f64) -> f64 {
    let mut a = SOUND_TABLE[0].1;
    for &(floor, val) in &SOUND_TABLE {
        if altitude >= floor {
            a = val;
        }
    }
    a
}

/// q_inf = rho V^2 / 2 with V = M a(H).
pub fn dynamic_pressure(mach: f64, altitude: f64) -> f64 {
    let v = mach * speed_of_sound(altitude);
    0.5 * density(altitude) * v * v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_decays_and_sound_table_steps() {
        assert!(density(20_000.0) < density(10_000.0));
        assert_eq!(speed_of_sound(0.0), 340.3);
        assert_eq!(speed_of_sound(15_000.0), 295.1);
        assert_eq!(speed_of_sound(50_000.0), 329.8);
    }

    #[test]
    fn dynamic_pressure_grows_with_mach_squared() {
        let q5 = dynamic_pressure(5.0, 20_000.0);
        let q7 = dynamic_pressure(7.0, 20_000.0);
        assert!((q7 / q5 - (7.0f64 / 5.0).powi(2)).abs() < 1e-12);
    }
}
