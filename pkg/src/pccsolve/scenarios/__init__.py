"""Scenario documents, the built-in library, execution and reports."""
from .document import Query, Scenario, dump_document, dump_scenario, parse_scenario, scenario_from_document
from .library import library_documents, paper_library, write_fixtures
from .report import QueryResult, Report, parse_report, render_report
from .runner import check_expectations, execute
