"""
validate 命令：运行验收检查并写出通过/失败报告
"""

import os
from typing import Any, Dict

from ..utils import Timer, save_json
from ..validators.rules import create_acceptance_rules
from .base import BaseProcessor

REPORT_FILE = "acceptance.json"


class ValidateProcessor(BaseProcessor):
    """验收检查处理器"""

    command = "validate"

    def execute(self) -> Dict[str, Any]:
        section = self.config.get('validate', {})
        rules = create_acceptance_rules(section.get('criteria'), include_slow=section.get('include_slow', False))
        self.logger.info(f"🔄 运行 {len(rules)} 项验收检查")

        report = []
        for rule in rules:
            with Timer() as timer:
                result = rule.validate(self.config)
            report.append({
                'criterion': rule.criterion,
                'name': rule.name,
                'description': rule.description,
                'passed': result.is_valid,
                'wall_time': timer.elapsed(),
                'metrics': result.metrics,
                'errors': result.errors,
            })

        path = os.path.join(self.run_dir, REPORT_FILE)
        save_json({'criteria': report}, path)
        self.files.append(path)
        self.write_table('acceptance.csv', ['criterion', 'name', 'passed', 'wall_time'],
                         ([r['criterion'], r['name'], r['passed'], r['wall_time']] for r in report))

        failed = [r['criterion'] for r in report if not r['passed']]
        summary: Dict[str, Any] = {
            'passed': not failed,
            'criteria': [r['criterion'] for r in report],
            'failed': failed,
        }
        if failed:
            summary['error'] = 'AcceptanceFailed'
            summary['message'] = f"未通过的验收项: {failed}"
            self.logger.warning(f"⚠️ {len(failed)} 项验收未通过: {failed}")
        return summary
