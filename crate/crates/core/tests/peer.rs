use socialai_core::baselines::{oracle_action, Policy, RandomPolicy};
use socialai_core::envs::{CueType, IntroSequence, Problem};
use socialai_core::episode::AgentAction;
use socialai_core::grid::{primitive, Direction, ObjectKind};
use socialai_core::lang::{Speaker, Utterance};
use socialai_core::peer::{feedback_word, pointing_dir, Phase};
use socialai_core::{EnvParams, Episode};

#[test]
fn ask_is_satisfied_from_the_step_it_is_said() {
    let p = EnvParams { intro: IntroSequence::Ask, ..EnvParams::info_seeking(Problem::Boxes) };
    let mut ep = Episode::new(&p, 9).unwrap();
    for _ in 0..3 {
        assert!(!ep.step(&AgentAction::new(primitive::NO_OP)).unwrap().info.intro_satisfied);
    }
    let wrong = Utterance::new(0, 0).unwrap();
    assert!(!ep.step(&AgentAction::speak(primitive::NO_OP, wrong)).unwrap().info.intro_satisfied);
    let r = ep.step(&AgentAction::speak(primitive::NO_OP, Utterance::help_please())).unwrap();
    assert!(r.info.intro_satisfied);
    assert!(ep.step(&AgentAction::new(primitive::NO_OP)).unwrap().info.intro_satisfied);
}

#[test]
fn ask_eye_contact_needs_both() {
    let p = EnvParams { intro: IntroSequence::AskEyeContact, ..EnvParams::info_seeking(Problem::Boxes) };
    for seed in 0..20 {
        let mut ep = Episode::new(&p, seed).unwrap();
        if ep.env().eye_contact() {
            continue;
        }
        let r = ep.step(&AgentAction::speak(primitive::NO_OP, Utterance::help_please())).unwrap();
        assert_eq!(r.info.intro_satisfied, ep.env().eye_contact());
    }
}

#[test]
fn no_intro_is_satisfied_at_reset() {
    let ep = Episode::new(&EnvParams::info_seeking(Problem::Boxes), 1).unwrap();
    assert!(ep.info().intro_satisfied);
}

#[test]
fn peer_gives_nothing_before_the_introduction() {
    for intro in [IntroSequence::EyeContact, IntroSequence::Ask, IntroSequence::AskEyeContact] {
        for cue in [CueType::Pointing, CueType::LanguageColor, CueType::LanguageFeedback, CueType::Imitation] {
            let p = EnvParams { intro, cue, ..EnvParams::info_seeking(Problem::Generators) };
            for seed in 0..15 {
                let mut ep = Episode::new(&p, seed).unwrap();
                let mut policy = RandomPolicy::new(seed);
                while !ep.is_done() {
                    let a = policy.act(ep.env()).unwrap();
                    let r = ep.step(&a).unwrap();
                    if r.info.intro_satisfied {
                        break;
                    }
                    let peer = ep.env().peer.as_ref().unwrap();
                    assert_eq!(peer.phase, Phase::WaitIntro);
                    assert!(peer.point.is_none());
                    assert!(ep.env().peer_log.is_empty());
                    assert!(peer.last_action != primitive::TOGGLE);
                }
            }
        }
    }
}

#[test]
fn pointing_singles_out_the_correct_object() {
    let mut pointed = 0;
    for problem in
        [Problem::Boxes, Problem::Switches, Problem::Levers, Problem::Generators, Problem::Marble, Problem::Doors]
    {
        let p = EnvParams { intro: IntroSequence::EyeContact, ..EnvParams::info_seeking(problem) };
        for seed in 0..40 {
            let mut ep = Episode::new(&p, seed).unwrap();
            while !ep.is_done() {
                let a = oracle_action(ep.env());
                ep.step(&a).unwrap();
                let env = ep.env();
                let peer = env.peer.as_ref().unwrap();
                if let Some(d) = peer.point {
                    pointed += 1;
                    let target = env.layout.correct_instrument().unwrap().pos;
                    let mut on_ray = Vec::new();
                    let mut c = peer.pose.pos.step(d);
                    while env.grid.in_bounds(c) {
                        if env.layout.instrument_at(c).is_some() {
                            on_ray.push(c);
                        }
                        c = c.step(d);
                    }
                    assert_eq!(on_ray, vec![target], "{problem:?} seed {seed}");
                }
            }
        }
    }
    assert!(pointed > 100);
}

#[test]
fn pointing_direction_helper() {
    let ep = Episode::new(&EnvParams::info_seeking(Problem::Boxes), 0).unwrap();
    let env = ep.env();
    let target = env.layout.instruments[env.layout.correct].pos;
    let other = env.layout.instruments[1 - env.layout.correct].pos;
    let from = target.offset(Direction::West, 1);
    if let Some(d) = pointing_dir(env, from, target, &[other]) {
        let mut c = from.step(d);
        let mut hit = false;
        while env.grid.in_bounds(c) {
            assert_ne!(c, other);
            hit |= c == target;
            c = c.step(d);
        }
        assert!(hit);
    }
}

#[test]
fn feedback_tracks_distance() {
    assert_eq!(feedback_word(1), "Hot");
    assert_eq!(feedback_word(2), "Warm");
    assert_eq!(feedback_word(4), "Medium");
    assert_eq!(feedback_word(5), "Cold");
    let p = EnvParams { cue: CueType::LanguageFeedback, ..EnvParams::info_seeking(Problem::Switches) };
    let mut saw_hot = false;
    for seed in 0..30 {
        let mut ep = Episode::new(&p, seed).unwrap();
        let target = ep.env().layout.correct_instrument().unwrap().pos;
        while !ep.is_done() {
            let a = oracle_action(ep.env());
            ep.step(&a).unwrap();
            let env = ep.env();
            if let Some(e) = env.peer_log.last().filter(|e| e.step == env.step) {
                assert_eq!(e.text, feedback_word(env.agent.pos.manhattan(target)));
                saw_hot |= e.text == "Hot";
            }
        }
    }
    assert!(saw_hot);
}

#[test]
fn language_color_names_the_correct_object() {
    let p = EnvParams { cue: CueType::LanguageColor, ..EnvParams::info_seeking(Problem::Levers) };
    for seed in 0..30 {
        let mut ep = Episode::new(&p, seed).unwrap();
        ep.step(&AgentAction::new(primitive::NO_OP)).unwrap();
        let color = ep.env().correct_color().unwrap();
        let said = ep.env().dialogue.last_from(Speaker::Peer).unwrap();
        assert_eq!(said.text, color.name());
    }
}

#[test]
fn demonstration_restores_the_room() {
    for problem in
        [Problem::Boxes, Problem::Switches, Problem::Levers, Problem::Generators, Problem::Marble, Problem::Doors]
    {
        let p = EnvParams { cue: CueType::Imitation, ..EnvParams::info_seeking(problem) };
        for seed in 0..20 {
            let mut ep = Episode::new(&p, seed).unwrap();
            let mut ate = false;
            while !ep.is_done() && ep.env().peer.as_ref().unwrap().phase != Phase::Done {
                ep.step(&AgentAction::new(primitive::NO_OP)).unwrap();
                ate |= ep.env().peer.as_ref().unwrap().ate;
            }
            let env = ep.env();
            assert!(ate, "{problem:?} seed {seed}: peer never ate");
            assert_eq!(env.peer.as_ref().unwrap().phase, Phase::Done, "{problem:?} seed {seed}");
            assert_eq!(env.grid, env.initial, "{problem:?} seed {seed}");
        }
    }
}

#[test]
fn helper_leaves_the_apple() {
    let p = EnvParams { help: true, ..EnvParams::info_seeking(Problem::Doors) };
    for seed in 0..20 {
        let mut ep = Episode::new(&p, seed).unwrap();
        while !ep.is_done() && ep.env().peer.as_ref().unwrap().phase != Phase::Done {
            ep.step(&AgentAction::new(primitive::NO_OP)).unwrap();
        }
        let env = ep.env();
        assert!(!env.peer.as_ref().unwrap().ate);
        let apples = env.grid.objects().filter(|(_, o)| o.kind == ObjectKind::Apple && o.is_fresh_apple()).count();
        assert_eq!(apples, 1, "seed {seed}");
    }
}

#[test]
fn misleading_cues_only_name_present_colors() {
    let p = EnvParams {
        intro: IntroSequence::EyeContact,
        cue: CueType::LanguageColor,
        misleading_cues: true,
        ..EnvParams::info_seeking(Problem::Boxes)
    };
    for seed in 0..30 {
        let mut ep = Episode::new(&p, seed).unwrap();
        let colors: Vec<&str> = ep.env().layout.instruments.iter().map(|i| i.color.name()).collect();
        ep.step(&AgentAction::new(primitive::NO_OP)).unwrap();
        if ep.env().intro_done {
            continue;
        }
        let said = &ep.env().peer_log[0].text;
        assert!(colors.contains(&said.as_str()));
    }
}
