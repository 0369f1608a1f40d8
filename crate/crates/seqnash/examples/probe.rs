use seqnash::homotopy::{GammaInit, HomotopyOptions, HomotopySystem, Variant};
use seqnash::seqform::{build_sequence_form, expected_payoffs};
use seqnash::tracer::{trace, TracerParams};
use seqnash::game::parse_game;

fn main() {
    for name in ["fig1", "fig2", "fig3"] {
        let text = std::fs::read_to_string(format!("fixtures/{name}.game.json")).unwrap();
        let g = parse_game(&text).unwrap();
        let sf = build_sequence_form(&g).unwrap();
        for variant in [Variant::Lgne, Variant::Lbne] {
            for seed in [11u64, 22, 33, 44, 55] {
                let mut opts = HomotopyOptions::new(variant);
                opts.seed = seed;
                opts.gamma0 = GammaInit::Mode("random".into());
                let cfg = opts.materialize(&sf).unwrap();
                let sys = HomotopySystem::new(&sf, cfg).unwrap();
                let t0 = std::time::Instant::now();
                let r = trace(&sys, &TracerParams::default()).unwrap();
                let u = expected_payoffs(&sf, &r.final_plan);
                println!("{name} {variant} seed={seed}: {:?} steps={} gap={:.3e} t_last={:.3e} u={:?} {:?}",
                    r.termination, r.accepted_steps, r.final_gap,
                    r.trace.points.last().unwrap().point.t,
                    u.iter().map(|v| (v*1000.0).round()/1000.0).collect::<Vec<_>>(),
                    t0.elapsed());
            }
        }
    }
}
