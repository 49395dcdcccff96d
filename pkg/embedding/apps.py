import logging

from django.apps import AppConfig
from django.dispatch import Signal


logger = logging.getLogger(__name__)


class EmbeddingConfig(AppConfig):
    name = 'embedding'
    verbose_name = 'Вложения графовых метрик'


# отправляется решателями после каждого решённого экземпляра;
# kwargs: solver, verdict ('found' | 'infeasible' | 'budget'), nodes, millis
instance_solved = Signal()


def instance_solved_dispatcher(sender, **kwargs):
    logger.info('%s: %s (%s nodes, %s ms)', kwargs.get('solver'), kwargs.get('verdict'),
                kwargs.get('nodes'), kwargs.get('millis'))


instance_solved.connect(instance_solved_dispatcher)
