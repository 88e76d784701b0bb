"""coopsim: directional-statement toolchain and deterministic trust simulator.

Modules:

* statements  - grammar, parser, canonical printer, fragmentation
* trust       - five-level appreciation stores and assessment policies
* appraisal   - consultant credibility, gating, attribute install rules
* lifecycle   - fragment life-cycle with linear fading
* agents      - trust-driven behavior rules of a single agent
* reputation  - letter-of-recommendation flow and survey averaging
* engine      - tick-driven scenario runner with byte-stable traces
* corpus      - worked statement corpus in canonical notation
"""

from .statements import (
    Body,
    DirectionalKind,
    FadeSpec,
    FragmentCounter,
    FragmentIdentity,
    ScopeMembershipError,
    Statement,
    StatementError,
    StatementSyntaxError,
    ValidityWindow,
    WindowOrderError,
    equivalent,
    fragment_on_issue,
    normalize,
    parse,
    render,
)
from .trust import (
    PTRUST,
    AppreciationKey,
    AppreciationKind,
    Outcome,
    TramPolicy,
    TrustStore,
    clamp_level,
    expectation,
    level_from_history,
)
from .appraisal import (
    ATTRIBUTE_CATALOG,
    AttributeVector,
    ConsultantProfile,
    InstallVerdict,
    Route,
    attribute_install_decision,
    credibility_gate,
    credibility_level,
    credibility_score,
)
from .lifecycle import LifecycleError, LifecycleRecord, LifecycleState
from .agents import (
    Action,
    ActionKind,
    AgentState,
    on_adequacy_promise,
    on_imposition,
    on_outcome,
    on_task_request,
)
from .reputation import lor_update, reputation_distribution, survey_reinit
from .engine import (
    InterleavingStrategy,
    RunResult,
    Scenario,
    ScenarioError,
    expect_check,
    load,
    load_path,
    run,
)
from .corpus import CORPUS_TEXTS, corpus

__version__ = "0.1.0"
