"""Maps shared between robots"""
from django.core.validators import MinValueValidator
from django.db import models
from safedelete.models import SafeDeleteModel
from safedelete.models import SOFT_DELETE

from ..fht.codec import deserialize, serialize


class StoredMap(SafeDeleteModel):

    _safedelete_policy = SOFT_DELETE
    name = models.CharField(max_length=100,)
    world = models.CharField(max_length=100,)
    mode = models.CharField(max_length=20,)
    created_date = models.DateTimeField(auto_now_add=True)
    payload = models.TextField()
    storage_bytes = models.IntegerField(validators=[MinValueValidator(0)],)
    main_count = models.IntegerField(validators=[MinValueValidator(0)], default=0)
    support_count = models.IntegerField(validators=[MinValueValidator(0)], default=0)
    edge_count = models.IntegerField(validators=[MinValueValidator(0)], default=0)

    @classmethod
    def from_map(cls, fht_map, name, world, mode):
        """Unsaved row holding the serialized map and its counts"""
        data = serialize(fht_map)
        counts = fht_map.counts()
        return cls(name=name, world=world, mode=mode, payload=data.decode("utf-8"),
                   storage_bytes=len(data), main_count=counts["main"],
                   support_count=counts["support"], edge_count=counts["edges"])

    @property
    def fht_map(self):
        """Decoded map

        Returns:
            FhtMap -- raises MapFormatError when the payload is damaged
        """
        return deserialize(self.payload)

    class Meta:
        verbose_name = ("stored map")
        verbose_name_plural = ("stored maps")
        ordering = ("id",)
