"""pk-forge: a procedural-knowledge graph toolkit.

Typed procedures, steps, and execution traces over an in-memory RDF triple
store, with Turtle / N-Triples / JSON-LD I/O, shape-rule validation, a
competency-question query engine, an execution recorder, and a CLI + HTTP
service for the elicitation front end.
"""

from .vocab import (
    ControlledVocab,
    Iri,
    PrefixMap,
    UnknownPrefix,
    VocabTerm,
    default_prefixes,
    execution_statuses,
    expand,
    procedure_statuses,
    shrink,
    term_table,
)
from .store import (
    BlankNode,
    CyclicHierarchy,
    Graph,
    Literal,
    MalformedTriple,
    SchemaHierarchy,
    Triple,
    default_schema,
    isomorphic,
    load_snapshot,
    materialize_subclass_closure,
    save_snapshot,
)
from .rdfio import (
    ParseDiagnostic,
    SerializationOptions,
    TurtleParseError,
    parse_turtle,
    serialize,
    serialize_jsonld,
    serialize_ntriples,
    serialize_turtle,
)
from .model import (
    AgentRole,
    BranchingOrder,
    CyclicOrder,
    DisconnectedOrder,
    ErrorDef,
    ExecutionTrace,
    Feedback,
    Issue,
    MachineInfo,
    Occurrence,
    Procedure,
    Question,
    Step,
    StepExecution,
    UnknownLevel,
    flatten,
    order_steps,
    version_chain,
)
from .mapper import (
    LiftReport,
    MalformedTimestamp,
    NotAProcedure,
    NotAnExecution,
    ProcedureBundle,
    lift_execution,
    lift_procedure,
    lift_procedures,
    lower_execution,
    lower_procedure,
    procedure_subgraph,
)
from .validation import Finding, Rule, ValidationReport, builtin_rules, validate
from .cq import (
    CompetencyQuery,
    ResultTable,
    UnboundParameter,
    UnknownQuery,
    catalog,
    run,
    run_by_id,
)
from .session import (
    OverrunReport,
    Session,
    overrun_report,
    start_execution,
)
from .fixtures import loto_graph, recipe_graph, combined_graph

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
