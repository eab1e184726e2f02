"""Template manager for verification reports."""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader, Template

from .errors import ConfigError


class TemplateManager:
    """Report templates stored next to a JSON description each.

    Available templates:
    - report: one table row per check
    - summary: pass counts followed by the failed checks
    """

    def __init__(self, templates_dir: Optional[str] = None):
        """Initialize template manager.

        Args:
            templates_dir: Directory containing templates. If None, uses the packaged templates.
        """
        if templates_dir is None:
            templates_dir = Path(__file__).parent / 'templates'
        self.templates_dir = Path(templates_dir)
        self.env = Environment(loader=FileSystemLoader(str(self.templates_dir)), autoescape=False)
        self.schema = self._load_schema()

    def _load_schema(self) -> Dict[str, Any]:
        schema_path = self.templates_dir / 'schema.json'
        with open(schema_path) as f:
            return json.load(f)

    def list_templates(self) -> List[Dict[str, str]]:
        """List available templates.

        Returns:
            List of dictionaries with name, description and layout
        """
        templates = []
        for template_file in sorted(self.templates_dir.glob('*.html')):
            name = template_file.stem
            config_path = self.templates_dir / f'{name}.json'
            if not config_path.exists():
                continue
            with open(config_path) as f:
                config = json.load(f)
            templates.append({
                'name': name,
                'description': config.get('description', ''),
                'layout': config.get('layout', 'table'),
            })
        return templates

    def get_template(self, name: str = 'report') -> Template:
        """Get template by name.

        Raises:
            ConfigError: If the template is not found
        """
        if not (self.templates_dir / f'{name}.html').exists():
            available = [t['name'] for t in self.list_templates()]
            templates_str = '\n- '.join([''] + available)
            raise ConfigError(
                f"Template '{name}' not found. Available templates:{templates_str}"
            )
        return self.env.get_template(f'{name}.html')

    def validate_template(self, template_data: Dict[str, Any]) -> bool:
        """Validate a template description against the schema.

        Raises:
            ConfigError: If validation fails
        """
        required = set(self.schema['required'])
        missing = required - set(template_data.keys())
        if missing:
            raise ConfigError(f"Missing required fields: {', '.join(sorted(missing))}")

        for key, value in template_data.items():
            if key not in self.schema['properties']:
                raise ConfigError(f"Unknown field: {key}")
            prop = self.schema['properties'][key]
            if prop.get('enum') and value not in prop['enum']:
                allowed = ', '.join(prop['enum'])
                raise ConfigError(
                    f"Invalid value for {key}: {value}. Allowed values: {allowed}"
                )
        return True
