using UnityEngine;

// Obstacle that ends the run on contact (see the state owner's rules).
public class LavaHazard : MonoBehaviour
{
    public bool armed = true;

    void OnCollisionEnter(Collision collision)
    {
        if (armed)
        {
            RuleBook.Instance.ReportContact(gameObject, collision.gameObject, false);
        }
    }

    void OnTriggerEnter(Collider other)
    {
        if (armed)
        {
            RuleBook.Instance.ReportContact(gameObject, other.gameObject, true);
        }
    }
}
