use socialai_core::envs::EnvParams;
use socialai_core::episode::Episode;
use socialai_core::grid::primitive;
use socialai_core::textworld::render_obs;
use socialai_llm::eval::{run_episode, run_episode_with};
use socialai_llm::provider::{CompletionProvider, ProviderSpec};
use socialai_llm::testset::{select_seeds, NAMES};
use socialai_llm::{build_prompt, default_config, run_eval, Error, EvalReport, PastStep, PromptConfig, TestSet};

#[test]
fn shipped_seed_lists_follow_selection_rule() {
    for name in NAMES {
        let ts = TestSet::shipped(name).unwrap();
        let params = ts.params().unwrap();
        assert_eq!(ts.seeds, select_seeds(&params, ts.seeds.len(), ts.step_limit).unwrap(), "{name}");
    }
    assert_eq!(TestSet::shipped("asocialbox").unwrap().seeds.len(), 10);
    assert_eq!(TestSet::shipped("colorboxes").unwrap().seeds.len(), 20);
    assert!(TestSet::shipped("nope").is_err());
}

#[test]
fn in_context_blocks() {
    let count = |name: &str| {
        let ts = TestSet::shipped(name).unwrap();
        let text = ts.in_context_text().unwrap();
        assert!(text.ends_with("Success!\n"));
        text.matches("New episode.").count()
    };
    assert_eq!(count("asocialbox"), 6);
    assert_eq!(count("colorboxes"), 5);
    assert_eq!(count("colorboxes-gen"), 4);
    let text = TestSet::shipped("asocialbox").unwrap().in_context_text().unwrap();
    assert!(text.starts_with(
        "New episode.\nObs : 1 steps in front of you and 1 steps to the left there is a closed green lockablebox \n"
    ));
    let gen = TestSet::shipped("colorboxes-gen").unwrap();
    let (a, b) = gen.regenerated_lines.unwrap();
    let lines: Vec<_> = gen.in_context_text().unwrap().lines().collect();
    assert!(a < b && b <= lines.len() && !lines.contains(&"..."));
}

#[test]
fn mock_oracle_solves_every_test_set() {
    for name in NAMES {
        let ts = TestSet::shipped(name).unwrap();
        let r = run_eval(&ProviderSpec::MockOracle, &ts, &default_config(&ts).unwrap()).unwrap();
        assert_eq!(r.successes, ts.seeds.len(), "{name}");
        assert!(r.episodes.iter().all(|e| e.transcript.ends_with("Success!\n")));
    }
}

#[test]
fn garbage_provider_never_acts() {
    let ts = TestSet::shipped("colorboxes").unwrap();
    let r = run_eval(&ProviderSpec::parse("mock:garbage").unwrap(), &ts, &default_config(&ts).unwrap()).unwrap();
    assert_eq!(r.successes, 0);
    assert_eq!(r.no_op_fraction, 1.0);
    assert!(r.episodes.iter().all(|e| e.actions.len() == 15));
}

#[test]
fn evaluation_is_deterministic() {
    let ts = TestSet::shipped("colorboxes").unwrap();
    let cfg = default_config(&ts).unwrap();
    let spec = ProviderSpec::MockRandom(3);
    assert_eq!(run_eval(&spec, &ts, &cfg).unwrap(), run_eval(&spec, &ts, &cfg).unwrap());
}

#[test]
fn prompt_window_on_live_episode() {
    let ts = TestSet::shipped("asocialbox").unwrap();
    let params = ts.params().unwrap();
    let mut ep = Episode::new(&params, 1).unwrap();
    let mut obs = vec![render_obs(&ep.observation()).unwrap()];
    let turns = [
        primitive::TURN_LEFT,
        primitive::TURN_RIGHT,
        primitive::TURN_RIGHT,
        primitive::TURN_LEFT,
        primitive::TURN_LEFT,
    ];
    for &a in &turns {
        obs.push(render_obs(&ep.step(&socialai_core::AgentAction::new(a)).unwrap().obs).unwrap());
    }
    let history: Vec<_> = turns.iter().zip(&obs).map(|(&a, o)| PastStep { obs: o.clone(), action: a }).collect();
    let cfg = PromptConfig::new("");
    let p = build_prompt(&cfg, &history, &obs[5], None);
    let expected = format!("New episode.\n{}\nAct : turn left\n{}\nAct : turn left\n{}\nAct :", obs[3], obs[4], obs[5]);
    assert_eq!(p, expected);
}

struct Failing;

impl CompletionProvider for Failing {
    fn complete(&mut self, _: &str, _: usize) -> socialai_llm::Result<String> {
        Err(Error::Provider("connection refused".into()))
    }
}

#[test]
fn provider_failures_are_excluded_from_rate() {
    let ts = TestSet::shipped("asocialbox").unwrap();
    let cfg = default_config(&ts).unwrap();
    let params: EnvParams = ts.params().unwrap();
    let bad = run_episode_with(&mut Failing, &cfg, &params, 0, 15).unwrap();
    assert!(bad.error.is_some() && bad.actions.is_empty());
    let good = run_episode(&ProviderSpec::MockOracle, &cfg, &params, 1, 15).unwrap();
    let r = EvalReport::new(&ts, "mixed".into(), params, vec![bad, good]);
    assert_eq!((r.evaluated, r.errored, r.success_rate), (1, 1, 1.0));
}

struct Recorder(Vec<usize>);

impl CompletionProvider for Recorder {
    fn complete(&mut self, prompt: &str, _: usize) -> socialai_llm::Result<String> {
        self.0.push(prompt.len());
        Ok("move forward".into())
    }

    fn context_limit(&self) -> Option<usize> {
        Some(2000)
    }
}

#[test]
fn prompts_respect_context_limit() {
    let ts = TestSet::shipped("colorboxes").unwrap();
    let mut rec = Recorder(Vec::new());
    run_episode_with(&mut rec, &default_config(&ts).unwrap(), &ts.params().unwrap(), 0, 15).unwrap();
    assert!(!rec.0.is_empty() && rec.0.iter().all(|&n| n <= 2000));
}
