use affect_engine::io::{parse_config_str, render_circumplex_svg, render_csv, CSV_HEADER};
use affect_engine::scenario::run_config;
use affect_engine::{ScenarioConfig, TrajectoryLog};

fn log(id: u8) -> TrajectoryLog {
    run_config(&ScenarioConfig::preset(id).unwrap()).unwrap()
}

#[test]
fn csv_round_trips_affect_columns() {
    for id in 1..=5 {
        let log = log(id);
        let csv = render_csv(&log);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), log.steps.len());
        for (row, step) in rows.iter().zip(&log.steps) {
            assert_eq!(row.len(), 13);
            assert_eq!(row[0].parse::<usize>().unwrap(), step.t);
            assert_eq!(row[1].parse::<usize>().unwrap(), step.agent_location);
            assert_eq!(row[3], step.observation.visibility.as_str());
            let a = &step.affect;
            let expected = [
                a.valence_raw,
                a.arousal_raw,
                a.valence_norm,
                a.arousal_norm,
                a.radius,
                a.angle_deg,
            ];
            for (cell, value) in row[4..10].iter().zip(expected) {
                let parsed: f64 = cell.parse().unwrap();
                assert!((parsed - value).abs() <= 1e-6, "{cell} vs {value}");
            }
            assert_eq!(row[10], a.label.as_str());
        }
    }
}

#[test]
fn json_round_trips_exactly() {
    let log = log(3);
    let text = affect_engine::io::render_json(&log).unwrap();
    let back: TrajectoryLog = serde_json::from_str(&text).unwrap();
    assert_eq!(back, log);
}

/// Recovers normalized coordinates from the polyline of a rendered chart.
fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
    let start = svg.find("<polyline points=\"").unwrap() + "<polyline points=\"".len();
    let end = start + svg[start..].find('"').unwrap();
    svg[start..end]
        .split_whitespace()
        .map(|pair| {
            let (x, y) = pair.split_once(',').unwrap();
            let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
            ((x - 320.0) / 240.0, (320.0 - y) / 240.0)
        })
        .collect()
}

#[test]
fn scenario2_chart_stays_in_calm_sector() {
    let log = log(2);
    let svg = render_circumplex_svg(&log);
    assert_eq!(svg.matches("<polyline").count(), 1);
    let points = polyline_points(&svg);
    assert_eq!(points.len(), log.steps.len());
    for (v, a) in points {
        let radius = v.hypot(a);
        let angle = a.atan2(v).to_degrees().rem_euclid(360.0);
        assert!(
            radius < 0.1 + 1e-4 || (247.5..=292.5).contains(&angle),
            "({v}, {a})"
        );
    }
}

#[test]
fn resolved_configs_reparse_to_themselves() {
    let text =
        r#"[{"scenario_id": 1, "seed": 9}, {"scenario_id": 3, "horizon": 2}, {"scenario_id": 4}]"#;
    let configs = parse_config_str(text).unwrap();
    let resolved = serde_json::to_string(&configs).unwrap();
    assert_eq!(parse_config_str(&resolved).unwrap(), configs);
}
