using UnityEngine;

// Pickup worth `points`; the state owner decides what contact means.
public class GemPickup : MonoBehaviour
{
    public int points = 5;
    public float spinSpeed = 90f;

    void Update()
    {
        transform.Rotate(0f, spinSpeed * Time.deltaTime, 0f, Space.World);
    }

    void OnCollisionEnter(Collision collision)
    {
        RuleBook.Instance.ReportContact(gameObject, collision.gameObject, false);
    }

    void OnTriggerEnter(Collider other)
    {
        RuleBook.Instance.ReportContact(gameObject, other.gameObject, true);
    }
}
