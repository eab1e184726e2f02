"""Tests for the report template manager."""
import json

import pytest

from diskbench.errors import ConfigError
from diskbench.template_manager import TemplateManager


def test_template_manager_initialization():
    """Test template manager initialization."""
    tm = TemplateManager()
    assert tm.templates_dir.exists()
    assert (tm.templates_dir / 'report.html').exists()
    assert (tm.templates_dir / 'schema.json').exists()
    assert 'layout' in tm.schema['properties']


def test_template_list():
    """Test listing available templates."""
    tm = TemplateManager()
    templates = tm.list_templates()
    assert [t['name'] for t in templates] == ['report', 'summary']
    layouts = {t['name']: t['layout'] for t in templates}
    assert layouts == {'report': 'table', 'summary': 'summary'}
    for template in templates:
        assert template['description']


def test_template_validation():
    """Test template validation against schema."""
    tm = TemplateManager()
    valid_template = {
        "name": "test",
        "template": "test.html",
        "description": "Test template",
        "layout": "table"
    }
    assert tm.validate_template(valid_template)

    with pytest.raises(ConfigError, match="Missing required fields: description"):
        tm.validate_template({"name": "test", "template": "test.html"})

    with pytest.raises(ConfigError, match="Invalid value for layout: grid"):
        tm.validate_template({**valid_template, "layout": "grid"})

    with pytest.raises(ConfigError, match="Unknown field: docstyle"):
        tm.validate_template({**valid_template, "docstyle": "google"})


def test_packaged_descriptions_are_valid():
    """Every packaged template description passes the schema."""
    tm = TemplateManager()
    for path in tm.templates_dir.glob('*.json'):
        if path.name == "schema.json":
            continue
        with open(path) as f:
            assert tm.validate_template(json.load(f))


def test_template_not_found():
    """Test error handling for non-existent templates."""
    tm = TemplateManager()
    with pytest.raises(ConfigError, match="Template 'nonexistent' not found") as excinfo:
        tm.get_template('nonexistent')
    assert "- report" in str(excinfo.value)


def test_custom_templates_dir(tmp_path):
    """Templates can be loaded from another directory."""
    (tmp_path / 'schema.json').write_text('{"required": [], "properties": {}}')
    (tmp_path / 'plain.html').write_text('{{ title }}: {{ passed }}/{{ total }}')
    (tmp_path / 'plain.json').write_text('{"name": "plain", "description": "Plain text"}')
    tm = TemplateManager(str(tmp_path))
    assert tm.list_templates() == [{'name': 'plain', 'description': 'Plain text', 'layout': 'table'}]
    assert tm.get_template('plain').render(title='run', passed=3, total=4) == 'run: 3/4'


def test_template_rendering():
    """Test that all templates can render a report."""
    tm = TemplateManager()
    row = {"suite": "dimension", "invariant": "dimension bound", "name": "dimension root",
           "reference": "root of F", "lhs": "1e-16", "rhs": "1e-12", "passed": True, "detail": "worst k=0.2"}
    failed = dict(row, passed=False, detail="worst k=0.1")
    data = {
        'title': 'Test Report',
        'suite': 'dimension',
        'rows': [row, failed],
        'failed': [failed],
        'passed': 1,
        'total': 2,
        'body': '<p>body text</p>',
    }
    for template in tm.list_templates():
        rendered = tm.get_template(template['name']).render(**data)
        assert 'Test Report' in rendered
        assert '1 of 2 checks passed' in rendered
        assert '<p>body text</p>' in rendered
        assert 'worst k=0.1' in rendered
