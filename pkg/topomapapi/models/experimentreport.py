"""Evaluation reports written by the eval command"""
from django.db import models


class ExperimentReport(models.Model):
    world = models.CharField(max_length=100,)
    seed = models.IntegerField()
    modes = models.CharField(max_length=100,)
    created_date = models.DateTimeField(auto_now_add=True)
    payload = models.JSONField()
    failed_trials = models.IntegerField(default=0)

    @classmethod
    def from_run(cls, run_report):
        return cls(world=run_report.world, seed=run_report.seed,
                   modes=",".join(run_report.modes), payload=run_report.as_dict(),
                   failed_trials=run_report.failed_trials)

    class Meta:
        ordering = ("id",)
