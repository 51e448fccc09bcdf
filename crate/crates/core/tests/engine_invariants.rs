mod common;

use common::{contacts_from_pauses, reference_config, run, sorted_contacts};
use swim_mobility::engine::WaypointEvent;
use swim_mobility::{LocationClass, SeenUpdate};

#[test]
fn trips_obey_constant_speed_and_stay_in_area() {
    for (alpha, seed) in [(0.3, 1), (0.8, 2), (0.0, 3), (1.0, 4)] {
        let cfg = reference_config(alpha, 6, seed);
        let rep = run(&cfg, 20_000.0);
        assert!(!rep.trips.is_empty());
        for t in &rep.trips {
            let trip = t.trip;
            let len = trip.length();
            let travelled = cfg.speed * (trip.arrive_at - trip.depart_at);
            assert!((len - travelled).abs() <= 1e-9 * len.max(f64::MIN_POSITIVE));
            assert!(rep.map.cell(trip.to_cell).bounds.contains(trip.to));
            assert!(rep.map.area().contains(
                trip.position_at((trip.depart_at + trip.arrive_at) / 2.0)
                    .unwrap()
            ));
        }
        for w in &rep.waypoints {
            assert!(rep.map.area().contains(w.position));
        }
    }
}

#[test]
fn clock_is_monotone_and_runs_are_deterministic() {
    let cfg = reference_config(0.5, 8, 77);
    let a = run(&cfg, 10_000.0);
    let b = run(&cfg, 10_000.0);
    assert!(a.events.windows(2).all(|w| w[0].time <= w[1].time));
    assert_eq!(a.events, b.events);
    assert_eq!(a.waypoints, b.waypoints);
    assert_eq!(a.contacts, b.contacts);
    assert_eq!(a.nodes, b.nodes);
}

#[test]
fn waypoints_alternate_per_node() {
    let rep = run(&reference_config(0.3, 5, 8), 10_000.0);
    for node in 0..5 {
        let evs: Vec<_> = rep.waypoints.iter().filter(|w| w.node == node).collect();
        assert_eq!(evs[0].event, WaypointEvent::Depart);
        for w in evs.windows(2) {
            assert!(w[0].time <= w[1].time);
            assert_ne!(w[0].event, w[1].event);
        }
    }
}

#[test]
fn node_streams_do_not_depend_on_node_count() {
    // Initial placement and home are drawn from the node's own stream.
    let small =
        swim_mobility::Simulation::initialize(reference_config(0.3, 3, 5).params()).unwrap();
    let large =
        swim_mobility::Simulation::initialize(reference_config(0.3, 30, 5).params()).unwrap();
    for i in 0..3 {
        assert_eq!(small.nodes()[i].position, large.nodes()[i].position);
        assert_eq!(small.nodes()[i].home, large.nodes()[i].home);
    }
}

#[test]
fn homes_are_classified_once() {
    let rep = run(&reference_config(0.3, 50, 9), 0.0);
    for n in &rep.nodes {
        assert_eq!(
            n.classes
                .iter()
                .filter(|c| **c == LocationClass::Home)
                .count(),
            1
        );
        assert_eq!(n.classes[n.home], LocationClass::Home);
        assert_eq!(
            rep.map.cell_of(rep.initial_positions[n.id]).unwrap(),
            n.home
        );
    }
}

#[test]
fn contact_log_matches_pause_intersections() {
    // Small grid and long pauses make contacts frequent.
    for seed in 0..5 {
        let mut cfg = reference_config(0.5, 5, seed);
        cfg.no_of_locations = 4;
        cfg.wait_time = swim_mobility::WaitTimeDist::Uniform {
            min: 20.0,
            max: 200.0,
        };
        let rep = run(&cfg, 30_000.0);
        assert!(rep.contacts.len() > 10);
        let oracle = sorted_contacts(contacts_from_pauses(&rep.pauses));
        assert_eq!(sorted_contacts(rep.contacts.clone()), oracle);
        assert_eq!(rep.total_seen(), 2 * rep.contacts.len() as u64);
        for c in &rep.contacts {
            assert!(c.start <= c.end && c.a < c.b);
        }
        // seen counters only count completed encounters, never decrease
        for n in &rep.nodes {
            assert_eq!(n.seen.iter().sum::<u64>(), n.seen_total);
        }
    }
}

#[test]
fn contacts_per_pair_are_disjoint_and_ordered() {
    let mut cfg = reference_config(0.5, 6, 12);
    cfg.no_of_locations = 4;
    cfg.wait_time = swim_mobility::WaitTimeDist::Uniform {
        min: 20.0,
        max: 200.0,
    };
    let rep = run(&cfg, 30_000.0);
    for recs in swim_mobility::metrics::contacts_by_pair(&rep.contacts).values() {
        for w in recs.windows(2) {
            assert!(w[0].end <= w[1].start);
        }
    }
}

#[test]
fn bystanders_only_counts_half() {
    let mut cfg = reference_config(0.5, 6, 3);
    cfg.no_of_locations = 4;
    cfg.wait_time = swim_mobility::WaitTimeDist::Uniform {
        min: 20.0,
        max: 200.0,
    };
    cfg.seen_update = SeenUpdate::BystandersOnly;
    let rep = run(&cfg, 20_000.0);
    assert!(!rep.contacts.is_empty());
    assert_eq!(rep.total_seen(), rep.contacts.len() as u64);
}

#[test]
fn seen_never_decreases_during_a_run() {
    let mut cfg = reference_config(0.5, 6, 4);
    cfg.no_of_locations = 4;
    let mut sim = swim_mobility::Simulation::initialize(cfg.params()).unwrap();
    let mut last: Vec<Vec<u64>> = sim.nodes().iter().map(|n| n.seen.clone()).collect();
    while sim.step(5_000.0).is_some() {
        for (n, prev) in sim.nodes().iter().zip(&mut last) {
            assert!(n.seen.iter().zip(prev.iter()).all(|(a, b)| a >= b));
            *prev = n.seen.clone();
        }
    }
}
