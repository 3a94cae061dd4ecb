from django.db import models


class ScenarioRun(models.Model):
    """One toolkit invocation queued through the API, with its outcome."""

    STATUS_CHOICES = (
        ('pending', 'Pending'),
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    )

    command = models.CharField(max_length=32)
    arguments = models.JSONField(default=list, blank=True)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='pending')
    exit_code = models.IntegerField(null=True, blank=True)
    output = models.TextField(blank=True, null=True)
    result = models.JSONField(blank=True, null=True)
    error_message = models.TextField(blank=True, null=True)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.command} #{self.pk}"

    @property
    def argv(self):
        return [self.command, *self.arguments]

    def as_dict(self):
        return {
            'id': self.id,
            'command': self.command,
            'arguments': self.arguments,
            'status': self.status,
            'exit_code': self.exit_code,
            'result': self.result,
            'output': self.output if self.result is None else None,
            'error_message': self.error_message,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'updated_at': self.updated_at.isoformat() if self.updated_at else None,
        }
