//! Canonical units and conversions.
//!
//! Capacities are bytes, frequencies GHz, bandwidths decimal GB/s,
//! link rates Gbit/s and power watts. Binary prefixes only appear when
//! rendering.

pub const KIB: u64 = 1 << 10;
pub const MIB: u64 = 1 << 20;
pub const GIB: u64 = 1 << 30;
pub const TIB: u64 = 1 << 40;

pub const GB: u64 = 1_000_000_000;
pub const TB: u64 = 1_000_000_000_000;
pub const PB: u64 = 1_000_000_000_000_000;

/// Bytes to decimal terabytes.
pub fn bytes_to_tb(bytes: u64) -> f64 {
    bytes as f64 / TB as f64
}

/// Gbit/s to GB/s.
pub fn gbit_to_gbyte(gbit_s: f64) -> f64 {
    gbit_s / 8.0
}

/// Rounds to `digits` significant digits via the decimal representation,
/// so results are stable across platforms.
pub fn round_sig(value: f64, digits: usize) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), value);
    s.parse().unwrap_or(value)
}

/// Human rendering of a byte count using binary prefixes.
pub fn format_binary_bytes(bytes: u64) -> String {
    const UNITS: [(&str, u64); 4] = [("TiB", TIB), ("GiB", GIB), ("MiB", MIB), ("KiB", KIB)];
    for (name, size) in UNITS {
        if bytes >= size {
            let v = bytes as f64 / size as f64;
            return format!("{} {name}", trim_float(v, 2));
        }
    }
    format!("{bytes} B")
}

/// Formats with at most `decimals` fractional digits, dropping trailing zeros.
pub fn trim_float(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sig_keeps_six_digits() {
        assert_eq!(round_sig(23.9616, 6), 23.9616);
        assert_eq!(round_sig(0.919_456_789, 6), 0.919457);
        assert_eq!(round_sig(142_656.0, 6), 142_656.0);
        assert_eq!(round_sig(1_234_567.0, 6), 1_234_570.0);
        assert_eq!(round_sig(0.0, 6), 0.0);
    }

    #[test]
    fn binary_rendering() {
        assert_eq!(format_binary_bytes(768 * GIB), "768 GiB");
        assert_eq!(format_binary_bytes(1536 * GIB), "1.5 TiB");
        assert_eq!(format_binary_bytes(48 * KIB), "48 KiB");
        assert_eq!(format_binary_bytes(12), "12 B");
    }

    #[test]
    fn trim() {
        assert_eq!(trim_float(1228.80, 3), "1228.8");
        assert_eq!(trim_float(3.0, 1), "3");
    }
}
